//! Named structures: the Fano and non-Fano configurations, L_p, the Reid
//! cycle matroid R_cycle[n] (abstract and inside L_p) and the group-expansion
//! seeds L_0((Z_p)^n K_3).
//!
//! Builders produce the abstract structure from its combinatorial
//! presentation, plus a point map into the coordinate plane when one exists.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{is_prime, Field, FieldError};
use crate::geometry::{build_pg, CoordinatePlane, GeometryError, ProjPoint, Triple};
use crate::incidence::{IncidenceStructure, StructureError};
use crate::pointset::PointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("parameter {0} must be prime")]
    NonPrimeParameter(u32),
    #[error("order {p}^{n} is not supported (no built-in field)")]
    UnsupportedOrder { p: u32, n: u32 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("unknown structure name {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A structure together with an optional embedding into a coordinate plane.
#[derive(Debug, Clone)]
pub struct LabeledStructure {
    pub name: String,
    pub structure: IncidenceStructure,
    pub embedding: Option<Embedding>,
}

/// Injective point map into the points of a coordinate plane.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub ambient: CoordinatePlane,
    pub map: Vec<u32>,
}

impl Embedding {
    /// Image of the whole structure as an ambient point set.
    pub fn image(&self) -> PointSet {
        self.ambient.structure().set_of(self.map.iter().copied())
    }

    /// Image of a subset of the structure's points.
    pub fn image_of(&self, s: &PointSet) -> PointSet {
        self.ambient.structure().set_of(s.iter().map(|p| self.map[p as usize]))
    }

    /// Checks injectivity and that every 3-subset has the same rank in the
    /// structure and in the ambient. Returns the first offending triple.
    pub fn check(&self, s: &IncidenceStructure) -> Result<(), [u32; 3]> {
        let amb = self.ambient.structure();
        let mut seen = amb.empty_set();
        for &v in &self.map {
            if !seen.insert(v) {
                return Err([v, v, v]);
            }
        }
        let n = s.point_count() as u32;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (ia, ib, ic) = (
                        self.map[a as usize],
                        self.map[b as usize],
                        self.map[c as usize],
                    );
                    if s.collinear(a, b, c) != amb.collinear(ia, ib, ic) {
                        return Err([a, b, c]);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Names accepted by [`build_named`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Fano,
    NonFano,
    Lp(u32),
    Reid(u32),
    ReidInLp(u32),
    GroupExpansion(u32, u32),
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::Fano => write!(f, "fano"),
            Named::NonFano => write!(f, "nonfano"),
            Named::Lp(p) => write!(f, "lp:{p}"),
            Named::Reid(n) => write!(f, "reid:{n}"),
            Named::ReidInLp(p) => write!(f, "reid_in_lp:{p}"),
            Named::GroupExpansion(p, n) => write!(f, "group_expansion:{p},{n}"),
        }
    }
}

impl Named {
    /// Builds from a bare name plus `-p`/`-n` style parameters.
    pub fn from_parts(name: &str, p: Option<u32>, n: Option<u32>) -> Result<Named, ConstructionError> {
        let need = |v: Option<u32>, what: &str| {
            v.ok_or_else(|| ConstructionError::BadParameter(format!("{name} needs {what}")))
        };
        match name {
            "fano" => Ok(Named::Fano),
            "nonfano" => Ok(Named::NonFano),
            "lp" => Ok(Named::Lp(need(p, "-p")?)),
            "reid" => Ok(Named::Reid(need(n.or(p), "-n")?)),
            "reid_in_lp" => Ok(Named::ReidInLp(need(p, "-p")?)),
            "group_expansion" => Ok(Named::GroupExpansion(need(p, "-p")?, n.unwrap_or(1))),
            _ => Err(ConstructionError::UnknownName(name.to_string())),
        }
    }
}

impl FromStr for Named {
    type Err = ConstructionError;

    /// `fano`, `nonfano`, `lp:5`, `reid:4`, `reid_in_lp:5`, `group_expansion:2,2`.
    fn from_str(s: &str) -> Result<Named, ConstructionError> {
        let (name, args) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b)),
            None => (s.trim(), None),
        };
        let nums: Vec<u32> = match args {
            None => Vec::new(),
            Some(a) => a
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| ConstructionError::BadParameter(format!("{t:?} in {s:?}")))
                })
                .collect::<Result<_, _>>()?,
        };
        let arity_ok = match name {
            "fano" | "nonfano" => nums.is_empty(),
            "lp" | "reid" | "reid_in_lp" => nums.len() == 1,
            "group_expansion" => nums.len() == 2 || nums.len() == 1,
            _ => return Err(ConstructionError::UnknownName(name.to_string())),
        };
        if !arity_ok {
            return Err(ConstructionError::BadParameter(format!(
                "wrong number of parameters in {s:?}"
            )));
        }
        Named::from_parts(name, nums.first().copied(), nums.get(1).copied())
    }
}

/// Builds one of the named structures.
pub fn build_named(which: Named) -> Result<LabeledStructure, ConstructionError> {
    match which {
        Named::Fano => fano(),
        Named::NonFano => nonfano(),
        Named::Lp(p) => lp(p),
        Named::Reid(n) => reid(n),
        Named::ReidInLp(p) => reid_in_lp(p),
        Named::GroupExpansion(p, n) => group_expansion(p, n),
    }
}

/// Labels of the HP fixtures, in point order.
pub const HP_LABELS: [&str; 7] = ["y", "x", "z", "o", "q", "r", "s"];

/// The six lines every HP configuration has, on fixture indices.
pub const HP_LINES: [[u32; 3]; 6] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 5, 6],
    [2, 3, 6],
    [2, 4, 5],
    [1, 4, 6],
];

/// The extra line `{x, o, r}` of the Fano case.
pub const HP_FANO_LINE: [u32; 3] = [1, 3, 5];

fn hp_fixture(
    name: &str,
    fano: bool,
    p: u32,
    coords: [[i64; 3]; 7],
) -> Result<LabeledStructure, ConstructionError> {
    let mut lines: Vec<Vec<u32>> = HP_LINES.iter().map(|l| l.to_vec()).collect();
    if fano {
        lines.push(HP_FANO_LINE.to_vec());
    }
    let labels = HP_LABELS.iter().map(|s| Some(s.to_string())).collect();
    let structure = IncidenceStructure::new(7, lines)?.with_labels(labels);
    let ambient = build_pg(&prime_field(p)?)?;
    let map = coords
        .iter()
        .map(|&c| ambient.index_of_ints(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabeledStructure {
        name: name.to_string(),
        structure,
        embedding: Some(Embedding { ambient, map }),
    })
}

/// F_7 labeled y,x,z,o,q,r,s, embedded in PG(2,2).
pub fn fano() -> Result<LabeledStructure, ConstructionError> {
    hp_fixture(
        "fano",
        true,
        2,
        [
            [1, 0, 0],
            [1, 1, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 0, 1],
            [1, 1, 1],
            [0, 1, 1],
        ],
    )
}

/// F_7⁻ labeled y,x,z,o,q,r,s, embedded in PG(2,3).
pub fn nonfano() -> Result<LabeledStructure, ConstructionError> {
    hp_fixture(
        "nonfano",
        false,
        3,
        [
            [1, 0, 0],
            [1, 2, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 0, 1],
            [1, 1, 1],
            [0, 1, 1],
        ],
    )
}

fn prime_field(p: u32) -> Result<Field, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NonPrimeParameter(p));
    }
    Field::prime(p).map_err(|e| ConstructionError::Geometry(e.into()))
}

/// Three concurrent lines through `[0,1,0]` over `field`: points
/// `[0,a,1]`, `[1,a,1]`, `[1,a,0]` (a in the field, by encoded value) and
/// `[0,1,0]`, numbered in that order.
fn three_concurrent_lines(
    name: String,
    field: &Field,
) -> Result<LabeledStructure, ConstructionError> {
    let q = field.order();
    let a_pt = |a: u32| a; // [0,a,1]
    let b_pt = |a: u32| q + a; // [1,a,1]
    let c_pt = |a: u32| 2 * q + a; // [1,a,0]
    let top = 3 * q; // [0,1,0]
    let n = 3 * q + 1;

    let mut lines: Vec<Vec<u32>> = Vec::with_capacity(3 + (q * q) as usize);
    for base in [0, q, 2 * q] {
        let mut l: Vec<u32> = (base..base + q).collect();
        l.push(top);
        lines.push(l);
    }
    // <j,-1,i> = {[0,i,1], [1,i+j,1], [1,j,0]}
    for j in 0..q {
        for i in 0..q {
            let mut l = vec![a_pt(i), b_pt(field.add_raw(i, j)), c_pt(j)];
            l.sort_unstable();
            lines.push(l);
        }
    }

    let mut raw: Vec<Triple> = Vec::with_capacity(n as usize);
    raw.extend((0..q).map(|a| [0, a, 1]));
    raw.extend((0..q).map(|a| [1, a, 1]));
    raw.extend((0..q).map(|a| [1, a, 0]));
    raw.push([0, 1, 0]);
    let labels = raw
        .iter()
        .map(|&t| Some(ProjPoint::from_raw(field, t).display(field)))
        .collect();
    let structure = IncidenceStructure::new(n as usize, lines)?.with_labels(labels);
    let ambient = build_pg(field)?;
    let map = raw
        .iter()
        .map(|t| ambient.index_of_raw(t).expect("nonzero triple"))
        .collect();
    Ok(LabeledStructure {
        name,
        structure,
        embedding: Some(Embedding { ambient, map }),
    })
}

/// L_p: the restriction of PG(2,p) to three concurrent lines, 3p+1 points.
pub fn lp(p: u32) -> Result<LabeledStructure, ConstructionError> {
    let f = prime_field(p)?;
    three_concurrent_lines(format!("lp:{p}"), &f)
}

/// L_0((Z_p)^n K_3), realized on three concurrent lines of PG(2,p^n).
pub fn group_expansion(p: u32, n: u32) -> Result<LabeledStructure, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NonPrimeParameter(p));
    }
    if n == 0 {
        return Err(ConstructionError::BadParameter("n must be at least 1".into()));
    }
    let f = Field::new(p, n, None).map_err(|e| match e {
        FieldError::MissingModulus { .. } | FieldError::UnsupportedOrder(_) => {
            ConstructionError::UnsupportedOrder { p, n }
        }
        other => ConstructionError::Geometry(other.into()),
    })?;
    three_concurrent_lines(format!("group_expansion:{p},{n}"), &f)
}

/// The abstract Reid cycle matroid R_cycle[n] on
/// `a_0..a_{n-1}, b_0..b_{n-1}, c_0, c_1, d` (in that order).
pub fn reid(n: u32) -> Result<LabeledStructure, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::BadParameter(format!(
            "reid needs n >= 2, got {n}"
        )));
    }
    let a = |i: u32| i % n;
    let b = |i: u32| n + i % n;
    let (c0, c1, d) = (2 * n, 2 * n + 1, 2 * n + 2);
    let mut lines: Vec<Vec<u32>> = Vec::new();
    lines.push((0..n).map(a).chain([d]).collect());
    lines.push((0..n).map(b).chain([d]).collect());
    lines.push(vec![c0, c1, d]);
    for i in 0..n {
        lines.push(vec![a(i), b(i), c0]);
        lines.push(vec![a(i), b(i + 1), c1]);
    }
    let mut labels: Vec<Option<String>> = Vec::new();
    labels.extend((0..n).map(|i| Some(format!("a{i}"))));
    labels.extend((0..n).map(|i| Some(format!("b{i}"))));
    labels.extend(["c0", "c1", "d"].map(|s| Some(s.to_string())));
    let structure = IncidenceStructure::new((2 * n + 3) as usize, lines)?.with_labels(labels);
    Ok(LabeledStructure {
        name: format!("reid:{n}"),
        structure,
        embedding: None,
    })
}

/// The points of L_p kept by R_cycle[p]: `[0,i,1]`, `[1,i,1]`, `[1,0,0]`,
/// `[1,1,0]`, `[0,1,0]` as indices into [`lp`].
pub fn reid_points_in_lp(p: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (0..2 * p).collect();
    v.extend([2 * p, 2 * p + 1, 3 * p]);
    v
}

/// R_cycle[p] as the restriction of L_p to
/// `{[0,i,1], [1,i,1]} ∪ {[1,0,0], [1,1,0], [0,1,0]}`.
///
/// The restriction keeps the point order of L_p, which lines up with
/// [`reid`]: `a_i = [0,i,1]`, `b_i = [1,i,1]`, `c_0 = [1,0,0]`,
/// `c_1 = [1,1,0]`, `d = [0,1,0]`.
pub fn reid_in_lp(p: u32) -> Result<LabeledStructure, ConstructionError> {
    let l = lp(p)?;
    let keep = l.structure.set_of(reid_points_in_lp(p));
    let (structure, old) = l.structure.restrict(&keep);
    let emb = l.embedding.expect("lp is embedded");
    let map = old.iter().map(|&o| emb.map[o as usize]).collect();
    Ok(LabeledStructure {
        name: format!("reid_in_lp:{p}"),
        structure,
        embedding: Some(Embedding {
            ambient: emb.ambient,
            map,
        }),
    })
}
