//! Homogeneous-coordinate model of PG(2,q).
//!
//! Points and lines are triples in canonical form: the first nonzero
//! coordinate is 1. Inside a [`CoordinatePlane`] they are numbered densely:
//!
//! ```text
//! [0,0,1]            -> 0
//! [0,1,c]            -> 1 + c
//! [1,b,c]            -> 1 + q + b*q + c
//! ```
//!
//! (field elements taken by their encoded value), and lines use the same
//! numbering on their coefficient triples.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElem, FieldError, FieldKey};
use crate::incidence::IncidenceStructure;

/// Default bound on the field order accepted by [`build_pg`].
pub const DEFAULT_MAX_PG_ORDER: u32 = 1 << 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the zero vector is not a projective point or line")]
    ZeroVector,
    #[error("points are equal; they do not span a line")]
    EqualPoints,
    #[error("lines are equal; they do not meet in a single point")]
    EqualLines,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("degenerate point configuration: {0}")]
    DegeneratePoints(&'static str),
    #[error("field order {order} exceeds the plane size bound {bound}")]
    TooLarge { order: u32, bound: u32 },
    #[error("cannot parse {0:?}: {1}")]
    Syntax(String, String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

// ---- raw triple helpers --------------------------------------------------

pub(crate) type Triple = [u32; 3];

#[inline]
pub(crate) fn cross_raw(f: &Field, a: &Triple, b: &Triple) -> Triple {
    [
        f.sub_raw(f.mul_raw(a[1], b[2]), f.mul_raw(a[2], b[1])),
        f.sub_raw(f.mul_raw(a[2], b[0]), f.mul_raw(a[0], b[2])),
        f.sub_raw(f.mul_raw(a[0], b[1]), f.mul_raw(a[1], b[0])),
    ]
}

#[inline]
pub(crate) fn dot_raw(f: &Field, a: &Triple, b: &Triple) -> u32 {
    f.add_raw(
        f.add_raw(f.mul_raw(a[0], b[0]), f.mul_raw(a[1], b[1])),
        f.mul_raw(a[2], b[2]),
    )
}

#[inline]
pub(crate) fn normalize_raw(f: &Field, v: &Triple) -> Option<Triple> {
    let lead = v.iter().copied().find(|&c| c != 0)?;
    if lead == 1 {
        return Some(*v);
    }
    let inv = f.inv_raw(lead);
    Some([f.mul_raw(v[0], inv), f.mul_raw(v[1], inv), f.mul_raw(v[2], inv)])
}

#[inline]
pub(crate) fn is_zero(v: &Triple) -> bool {
    v[0] == 0 && v[1] == 0 && v[2] == 0
}

/// Dense index of a canonical triple over a field of order `q`.
#[inline]
pub(crate) fn triple_index(q: u32, t: &Triple) -> u32 {
    if t[0] == 0 {
        if t[1] == 0 {
            0
        } else {
            1 + t[2]
        }
    } else {
        1 + q + t[1] * q + t[2]
    }
}

#[inline]
pub(crate) fn index_triple(q: u32, idx: u32) -> Triple {
    if idx == 0 {
        [0, 0, 1]
    } else if idx <= q {
        [0, 1, idx - 1]
    } else {
        let r = idx - 1 - q;
        [1, r / q, r % q]
    }
}

/// Harmonic conjugate of `x` with respect to `y` and `z` on raw triples.
///
/// Writes `x = a*y + b*z` and returns the canonical form of `a*y - b*z`.
/// Returns `None` when the inputs are not three distinct collinear points.
pub(crate) fn conjugate_raw(f: &Field, y: &Triple, z: &Triple, x: &Triple) -> Option<Triple> {
    let yz = cross_raw(f, y, z);
    let k = yz.iter().position(|&c| c != 0)?;
    if dot_raw(f, x, &yz) != 0 {
        return None;
    }
    let xz = cross_raw(f, x, z);
    let yx = cross_raw(f, y, x);
    let inv = f.inv_raw(yz[k]);
    let a = f.mul_raw(xz[k], inv);
    let b = f.mul_raw(yx[k], inv);
    if a == 0 || b == 0 {
        return None;
    }
    let v = [
        f.sub_raw(f.mul_raw(a, y[0]), f.mul_raw(b, z[0])),
        f.sub_raw(f.mul_raw(a, y[1]), f.mul_raw(b, z[1])),
        f.sub_raw(f.mul_raw(a, y[2]), f.mul_raw(b, z[2])),
    ];
    normalize_raw(f, &v)
}

// ---- public value types --------------------------------------------------

/// A point of PG(2,q) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [FieldElem; 3],
}

/// A line of PG(2,q), stored by its canonical coefficient triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    coords: [FieldElem; 3],
}

/// A cross-ratio: a field element, or infinity when the denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossRatioValue {
    Finite(FieldElem),
    Infinity,
}

/// Position of a point on a line relative to a [`LineChart`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineParam {
    Finite(FieldElem),
    Infinity,
}

fn check_key(f: &Field, t: &[FieldElem; 3]) -> Result<(), GeometryError> {
    for c in t {
        if !f.owns(*c) {
            return Err(FieldError::FieldMismatch(f.key(), c.key()).into());
        }
    }
    Ok(())
}

fn wrap(f: &Field, t: Triple) -> [FieldElem; 3] {
    [f.wrap(t[0]), f.wrap(t[1]), f.wrap(t[2])]
}

fn raw(t: &[FieldElem; 3]) -> Triple {
    [t[0].value(), t[1].value(), t[2].value()]
}

fn format_triple(f: &Field, t: &Triple, open: char, close: char) -> String {
    format!(
        "{open}{},{},{}{close}",
        f.format_raw(t[0]),
        f.format_raw(t[1]),
        f.format_raw(t[2])
    )
}

/// Parses `[x,y,z]` or `<a,b,c>` into a raw (unnormalised) triple.
fn parse_triple(f: &Field, text: &str, open: char, close: char) -> Result<Triple, GeometryError> {
    let t = text.trim();
    let body = t
        .strip_prefix(open)
        .and_then(|s| s.strip_suffix(close))
        .ok_or_else(|| GeometryError::Syntax(t.into(), format!("expected {open}..{close}")))?;
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != 3 {
        return Err(GeometryError::Syntax(t.into(), "expected three coordinates".into()));
    }
    let mut out = [0u32; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = f.parse_raw(part)?;
    }
    Ok(out)
}

impl ProjPoint {
    /// Canonical representative of a nonzero triple.
    pub fn new(f: &Field, coords: [FieldElem; 3]) -> Result<ProjPoint, GeometryError> {
        check_key(f, &coords)?;
        let t = normalize_raw(f, &raw(&coords)).ok_or(GeometryError::ZeroVector)?;
        Ok(ProjPoint { coords: wrap(f, t) })
    }

    /// Builds a point from integer coordinates in the prime subfield.
    pub fn from_ints(f: &Field, c: [i64; 3]) -> Result<ProjPoint, GeometryError> {
        ProjPoint::new(f, [f.from_int(c[0]), f.from_int(c[1]), f.from_int(c[2])])
    }

    pub fn coords(&self) -> [FieldElem; 3] {
        self.coords
    }

    pub fn key(&self) -> FieldKey {
        self.coords[0].key()
    }

    pub(crate) fn raw(&self) -> Triple {
        raw(&self.coords)
    }

    pub(crate) fn from_raw(f: &Field, t: Triple) -> ProjPoint {
        ProjPoint { coords: wrap(f, t) }
    }

    /// Parses a `[x,y,z]` literal.
    pub fn parse(f: &Field, text: &str) -> Result<ProjPoint, GeometryError> {
        let t = parse_triple(f, text, '[', ']')?;
        let t = normalize_raw(f, &t).ok_or(GeometryError::ZeroVector)?;
        Ok(ProjPoint::from_raw(f, t))
    }

    pub fn display(&self, f: &Field) -> String {
        format_triple(f, &self.raw(), '[', ']')
    }
}

impl ProjLine {
    pub fn new(f: &Field, coords: [FieldElem; 3]) -> Result<ProjLine, GeometryError> {
        check_key(f, &coords)?;
        let t = normalize_raw(f, &raw(&coords)).ok_or(GeometryError::ZeroVector)?;
        Ok(ProjLine { coords: wrap(f, t) })
    }

    pub fn from_ints(f: &Field, c: [i64; 3]) -> Result<ProjLine, GeometryError> {
        ProjLine::new(f, [f.from_int(c[0]), f.from_int(c[1]), f.from_int(c[2])])
    }

    pub fn coords(&self) -> [FieldElem; 3] {
        self.coords
    }

    pub(crate) fn raw(&self) -> Triple {
        raw(&self.coords)
    }

    pub(crate) fn from_raw(f: &Field, t: Triple) -> ProjLine {
        ProjLine { coords: wrap(f, t) }
    }

    /// Parses a `<a,b,c>` literal.
    pub fn parse(f: &Field, text: &str) -> Result<ProjLine, GeometryError> {
        let t = parse_triple(f, text, '<', '>')?;
        let t = normalize_raw(f, &t).ok_or(GeometryError::ZeroVector)?;
        Ok(ProjLine::from_raw(f, t))
    }

    pub fn display(&self, f: &Field) -> String {
        format_triple(f, &self.raw(), '<', '>')
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.raw();
        write!(fm, "[{},{},{}]", c[0], c[1], c[2])
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.raw();
        write!(fm, "<{},{},{}>", c[0], c[1], c[2])
    }
}

fn same_field_points(f: &Field, pts: &[&ProjPoint]) -> Result<(), GeometryError> {
    for p in pts {
        check_key(f, &p.coords)?;
    }
    Ok(())
}

/// The line joining two distinct points.
pub fn line_through(f: &Field, p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine, GeometryError> {
    same_field_points(f, &[p1, p2])?;
    let c = cross_raw(f, &p1.raw(), &p2.raw());
    let c = normalize_raw(f, &c).ok_or(GeometryError::EqualPoints)?;
    Ok(ProjLine::from_raw(f, c))
}

/// The common point of two distinct lines.
pub fn meet(f: &Field, l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint, GeometryError> {
    check_key(f, &l1.coords)?;
    check_key(f, &l2.coords)?;
    let c = cross_raw(f, &l1.raw(), &l2.raw());
    let c = normalize_raw(f, &c).ok_or(GeometryError::EqualLines)?;
    Ok(ProjPoint::from_raw(f, c))
}

/// `true` iff `xa + yb + zc = 0`.
pub fn incident(f: &Field, pt: &ProjPoint, l: &ProjLine) -> Result<bool, GeometryError> {
    check_key(f, &pt.coords)?;
    check_key(f, &l.coords)?;
    Ok(dot_raw(f, &pt.raw(), &l.raw()) == 0)
}

/// Whether three points lie on a common line (repeats allowed).
pub fn collinear(f: &Field, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<bool, GeometryError> {
    same_field_points(f, &[a, b, c])?;
    let n = cross_raw(f, &a.raw(), &b.raw());
    Ok(dot_raw(f, &c.raw(), &n) == 0)
}

/// Affine chart on a line: `base + t*direction` for finite `t`, and
/// `direction` itself at parameter infinity.
///
/// With `base = [1,0,0]` and `direction = [0,1,0]` this is the usual
/// parametrisation `t -> [1,t,0]` of the line `z = 0`.
#[derive(Debug, Clone)]
pub struct LineChart {
    field: Field,
    base: Triple,
    direction: Triple,
    /// cross(base, direction) and a component where it is nonzero.
    span: Triple,
    pivot: usize,
}

impl LineChart {
    pub fn new(f: &Field, base: &ProjPoint, direction: &ProjPoint) -> Result<LineChart, GeometryError> {
        same_field_points(f, &[base, direction])?;
        let span = cross_raw(f, &base.raw(), &direction.raw());
        let pivot = span
            .iter()
            .position(|&c| c != 0)
            .ok_or(GeometryError::EqualPoints)?;
        Ok(LineChart {
            field: f.clone(),
            base: base.raw(),
            direction: direction.raw(),
            span,
            pivot,
        })
    }

    pub fn line(&self) -> ProjLine {
        let t = normalize_raw(&self.field, &self.span).expect("chart span is nonzero");
        ProjLine::from_raw(&self.field, t)
    }

    pub fn point(&self, t: LineParam) -> ProjPoint {
        let f = &self.field;
        match t {
            LineParam::Infinity => ProjPoint::from_raw(f, normalize_raw(f, &self.direction).unwrap()),
            LineParam::Finite(t) => {
                let tv = t.value();
                let v = [
                    f.add_raw(self.base[0], f.mul_raw(tv, self.direction[0])),
                    f.add_raw(self.base[1], f.mul_raw(tv, self.direction[1])),
                    f.add_raw(self.base[2], f.mul_raw(tv, self.direction[2])),
                ];
                ProjPoint::from_raw(f, normalize_raw(f, &v).unwrap())
            }
        }
    }

    /// Homogeneous parameter `(lambda, mu)` with `x ~ lambda*base + mu*direction`.
    fn homogeneous(&self, x: &Triple) -> Result<(u32, u32), GeometryError> {
        let f = &self.field;
        if dot_raw(f, x, &self.span) != 0 {
            return Err(GeometryError::NotCollinear);
        }
        let inv = f.inv_raw(self.span[self.pivot]);
        let lambda = f.mul_raw(cross_raw(f, x, &self.direction)[self.pivot], inv);
        let mu = f.mul_raw(cross_raw(f, &self.base, x)[self.pivot], inv);
        Ok((lambda, mu))
    }

    pub fn param(&self, x: &ProjPoint) -> Result<LineParam, GeometryError> {
        same_field_points(&self.field, &[x])?;
        let f = &self.field;
        let (lambda, mu) = self.homogeneous(&x.raw())?;
        if lambda == 0 {
            Ok(LineParam::Infinity)
        } else {
            Ok(LineParam::Finite(f.wrap(f.mul_raw(mu, f.inv_raw(lambda)))))
        }
    }
}

/// Cross-ratio `(a,b;c,d) = ((c-a)(d-b)) / ((c-b)(d-a))` in any affine
/// parameter of the common line.
///
/// Evaluated with homogeneous parameters, so points at infinity need no
/// special case.
pub fn cross_ratio(
    f: &Field,
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
    d: &ProjPoint,
) -> Result<CrossRatioValue, GeometryError> {
    same_field_points(f, &[a, b, c, d])?;
    if a == b || a == c || b == c {
        return Err(GeometryError::DegeneratePoints("a, b, c must be pairwise distinct"));
    }
    if d == a || d == b {
        return Err(GeometryError::DegeneratePoints("d must differ from a and b"));
    }
    let chart = LineChart::new(f, a, b)?;
    let pa = chart.homogeneous(&a.raw())?;
    let pb = chart.homogeneous(&b.raw())?;
    let pc = chart.homogeneous(&c.raw())?;
    let pd = chart.homogeneous(&d.raw())?;
    // bracket [x y] = x.lambda * y.mu - y.lambda * x.mu
    let br = |x: (u32, u32), y: (u32, u32)| f.sub_raw(f.mul_raw(x.0, y.1), f.mul_raw(y.0, x.1));
    let num = f.mul_raw(br(pc, pa), br(pd, pb));
    let den = f.mul_raw(br(pc, pb), br(pd, pa));
    if den == 0 {
        return Ok(CrossRatioValue::Infinity);
    }
    Ok(CrossRatioValue::Finite(f.wrap(f.mul_raw(num, f.inv_raw(den)))))
}

/// The point `x'` on line `yz` with cross-ratio `(y,z;x,x') = -1`.
///
/// In characteristic 2 this is `x` itself.
pub fn harmonic_conjugate_cr(
    f: &Field,
    y: &ProjPoint,
    z: &ProjPoint,
    x: &ProjPoint,
) -> Result<ProjPoint, GeometryError> {
    same_field_points(f, &[y, z, x])?;
    if y == z || y == x || z == x {
        return Err(GeometryError::DegeneratePoints("y, z, x must be pairwise distinct"));
    }
    let t = conjugate_raw(f, &y.raw(), &z.raw(), &x.raw()).ok_or(GeometryError::NotCollinear)?;
    Ok(ProjPoint::from_raw(f, t))
}

// ---- the coordinate plane -----------------------------------------------

/// PG(2,q) with dense point/line numbering and its incidence structure.
#[derive(Clone)]
pub struct CoordinatePlane {
    field: Field,
    structure: IncidenceStructure,
}

impl fmt::Debug for CoordinatePlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG(2,{})", self.field.order())
    }
}

/// Builds PG(2,q) over `field`, refusing orders above `max_order`.
pub fn build_pg_bounded(field: &Field, max_order: u32) -> Result<CoordinatePlane, GeometryError> {
    let q = field.order();
    if q > max_order {
        return Err(GeometryError::TooLarge { order: q, bound: max_order });
    }
    let n = q * q + q + 1;
    let f = field;
    let mut lines: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
    for li in 0..n {
        let l = index_triple(q, li);
        // two independent points on l
        let cands = [
            cross_raw(f, &l, &[1, 0, 0]),
            cross_raw(f, &l, &[0, 1, 0]),
            cross_raw(f, &l, &[0, 0, 1]),
        ];
        let mut basis = None;
        'outer: for i in 0..3 {
            for j in i + 1..3 {
                if !is_zero(&cross_raw(f, &cands[i], &cands[j])) {
                    basis = Some((cands[i], cands[j]));
                    break 'outer;
                }
            }
        }
        let (u, v) = basis.expect("every line has two independent points");
        let mut pts = Vec::with_capacity(q as usize + 1);
        pts.push(triple_index(q, &normalize_raw(f, &v).unwrap()));
        for t in 0..q {
            let w = [
                f.add_raw(u[0], f.mul_raw(t, v[0])),
                f.add_raw(u[1], f.mul_raw(t, v[1])),
                f.add_raw(u[2], f.mul_raw(t, v[2])),
            ];
            pts.push(triple_index(q, &normalize_raw(f, &w).unwrap()));
        }
        pts.sort_unstable();
        lines.push(pts);
    }
    let labels = (0..n)
        .map(|i| Some(format_triple(f, &index_triple(q, i), '[', ']')))
        .collect();
    let mut structure = IncidenceStructure::from_trusted(n as usize, lines);
    structure.set_labels(labels);
    Ok(CoordinatePlane {
        field: field.clone(),
        structure,
    })
}

/// Builds PG(2,q) with the default order bound.
pub fn build_pg(field: &Field) -> Result<CoordinatePlane, GeometryError> {
    build_pg_bounded(field, DEFAULT_MAX_PG_ORDER)
}

impl CoordinatePlane {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn point_count(&self) -> usize {
        self.structure.point_count()
    }

    pub fn point(&self, idx: u32) -> ProjPoint {
        ProjPoint::from_raw(&self.field, index_triple(self.order(), idx))
    }

    pub fn index_of(&self, pt: &ProjPoint) -> Result<u32, GeometryError> {
        check_key(&self.field, &pt.coords)?;
        Ok(triple_index(self.order(), &pt.raw()))
    }

    /// Index of the point with the given integer coordinates.
    pub fn index_of_ints(&self, c: [i64; 3]) -> Result<u32, GeometryError> {
        let p = ProjPoint::from_ints(&self.field, c)?;
        self.index_of(&p)
    }

    pub fn parse_point(&self, text: &str) -> Result<u32, GeometryError> {
        let p = ProjPoint::parse(&self.field, text)?;
        self.index_of(&p)
    }

    /// The line with dense index `idx` (same numbering as the structure's lines).
    pub fn line(&self, idx: u32) -> ProjLine {
        ProjLine::from_raw(&self.field, index_triple(self.order(), idx))
    }

    pub fn line_index_of(&self, l: &ProjLine) -> Result<u32, GeometryError> {
        check_key(&self.field, &l.coords)?;
        Ok(triple_index(self.order(), &l.raw()))
    }

    /// Index of the line through two distinct point indices.
    #[inline]
    pub fn line_index_through(&self, a: u32, b: u32) -> Option<u32> {
        let q = self.order();
        let c = cross_raw(&self.field, &index_triple(q, a), &index_triple(q, b));
        normalize_raw(&self.field, &c).map(|t| triple_index(q, &t))
    }

    /// Coordinate harmonic conjugate on point indices: the conjugate of `x`
    /// with respect to `y` and `z`.
    #[inline]
    pub fn conjugate_index(&self, y: u32, z: u32, x: u32) -> Option<u32> {
        if y == z || y == x || z == x {
            return None;
        }
        let q = self.order();
        let t = conjugate_raw(
            &self.field,
            &index_triple(q, y),
            &index_triple(q, z),
            &index_triple(q, x),
        )?;
        Some(triple_index(q, &t))
    }

    pub fn label(&self, idx: u32) -> String {
        self.point(idx).display(&self.field)
    }

    /// Index of the point spanned by a nonzero raw triple.
    pub(crate) fn index_of_raw(&self, t: &Triple) -> Option<u32> {
        normalize_raw(&self.field, t).map(|c| triple_index(self.order(), &c))
    }

    pub(crate) fn raw_point(&self, idx: u32) -> Triple {
        index_triple(self.order(), idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(f: &Field, c: [i64; 3]) -> ProjPoint {
        ProjPoint::from_ints(f, c).unwrap()
    }

    fn ln(f: &Field, c: [i64; 3]) -> ProjLine {
        ProjLine::from_ints(f, c).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(pt(&f5, [2, 4, 0]), pt(&f5, [1, 2, 0]));
        assert_eq!(pt(&f5, [2, 4, 0]).to_string(), "[1,2,0]");
        let f3 = Field::prime(3).unwrap();
        assert_eq!(pt(&f3, [0, 2, 1]).to_string(), "[0,1,2]");
        assert_eq!(
            ProjPoint::from_ints(&f3, [0, 0, 0]).unwrap_err(),
            GeometryError::ZeroVector
        );
        // idempotent
        let p = pt(&f5, [3, 3, 1]);
        assert_eq!(ProjPoint::new(&f5, p.coords()).unwrap(), p);
    }

    #[test]
    fn join_examples() {
        let f3 = Field::prime(3).unwrap();
        let l = line_through(&f3, &pt(&f3, [0, 0, 1]), &pt(&f3, [1, 1, 1])).unwrap();
        assert_eq!(l, ln(&f3, [1, 2, 0]));
        assert_eq!(l, ln(&f3, [-1, 1, 0]));
        let l = line_through(&f3, &pt(&f3, [1, 0, 1]), &pt(&f3, [0, 1, 1])).unwrap();
        assert_eq!(l, ln(&f3, [1, 1, 2]));
        for q in [2, 3, 5, 7] {
            let f = Field::prime(q).unwrap();
            let l = line_through(&f, &pt(&f, [1, 0, 0]), &pt(&f, [0, 1, 0])).unwrap();
            assert_eq!(l, ln(&f, [0, 0, 1]));
        }
        assert_eq!(
            line_through(&f3, &pt(&f3, [1, 1, 1]), &pt(&f3, [2, 2, 2])).unwrap_err(),
            GeometryError::EqualPoints
        );
    }

    #[test]
    fn meet_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(
            meet(&f3, &ln(&f3, [1, 0, 0]), &ln(&f3, [0, 0, 1])).unwrap(),
            pt(&f3, [0, 1, 0])
        );
        assert_eq!(
            meet(&f3, &ln(&f3, [0, 0, 1]), &ln(&f3, [1, 1, 2])).unwrap(),
            pt(&f3, [1, 2, 0])
        );
        assert_eq!(
            meet(&f3, &ln(&f3, [0, 0, 1]), &ln(&f3, [0, 0, 1])).unwrap_err(),
            GeometryError::EqualLines
        );
    }

    #[test]
    fn incidence_examples() {
        let f5 = Field::prime(5).unwrap();
        assert!(incident(&f5, &pt(&f5, [1, 2, 1]), &ln(&f5, [1, -1, 1])).unwrap());
        assert!(incident(&f5, &pt(&f5, [1, 2, 1]), &ln(&f5, [1, 4, 1])).unwrap());
        let f3 = Field::prime(3).unwrap();
        assert!(incident(&f3, &pt(&f3, [0, 1, 0]), &ln(&f3, [1, 0, 0])).unwrap());
        assert!(!incident(&f3, &pt(&f3, [1, 0, 0]), &ln(&f3, [1, 0, 0])).unwrap());
        assert!(matches!(
            incident(&f3, &pt(&f3, [1, 0, 0]), &ln(&f5, [1, 0, 0])),
            Err(GeometryError::Field(FieldError::FieldMismatch(..)))
        ));
    }

    #[test]
    fn cross_ratio_reflection_through_zero() {
        let f5 = Field::prime(5).unwrap();
        let chart = LineChart::new(&f5, &pt(&f5, [1, 0, 0]), &pt(&f5, [0, 1, 0])).unwrap();
        let at = |t: i64| chart.point(LineParam::Finite(f5.from_int(t)));
        let inf = chart.point(LineParam::Infinity);
        let v = cross_ratio(&f5, &at(0), &inf, &at(1), &at(-1)).unwrap();
        assert_eq!(v, CrossRatioValue::Finite(f5.from_int(-1)));
    }

    #[test]
    fn midpoint_has_conjugate_at_infinity() {
        let f5 = Field::prime(5).unwrap();
        let chart = LineChart::new(&f5, &pt(&f5, [1, 0, 0]), &pt(&f5, [0, 1, 0])).unwrap();
        let at = |t: i64| chart.point(LineParam::Finite(f5.from_int(t)));
        let minus_one = CrossRatioValue::Finite(f5.from_int(-1));
        for t in 0..5 {
            if t == 0 || t == 2 {
                continue;
            }
            assert_ne!(cross_ratio(&f5, &at(0), &at(2), &at(1), &at(t)).unwrap(), minus_one);
        }
        let inf = chart.point(LineParam::Infinity);
        assert_eq!(cross_ratio(&f5, &at(0), &at(2), &at(1), &inf).unwrap(), minus_one);
    }

    #[test]
    fn swapping_first_pair_inverts_cross_ratio() {
        let f7 = Field::prime(7).unwrap();
        let chart = LineChart::new(&f7, &pt(&f7, [1, 0, 0]), &pt(&f7, [0, 1, 0])).unwrap();
        let on_line: Vec<ProjPoint> = (0..7)
            .map(|t| chart.point(LineParam::Finite(f7.from_int(t))))
            .chain(std::iter::once(chart.point(LineParam::Infinity)))
            .collect();
        for a in &on_line {
            for b in &on_line {
                for c in &on_line {
                    for d in &on_line {
                        if a == b || a == c || b == c || d == a || d == b {
                            continue;
                        }
                        let ab = cross_ratio(&f7, a, b, c, d).unwrap();
                        let ba = cross_ratio(&f7, b, a, c, d).unwrap();
                        let (CrossRatioValue::Finite(x), CrossRatioValue::Finite(y)) = (ab, ba) else {
                            panic!("finite expected");
                        };
                        assert_eq!(f7.mul(x, y).unwrap(), f7.one());
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_examples() {
        let f5 = Field::prime(5).unwrap();
        let chart = LineChart::new(&f5, &pt(&f5, [1, 0, 0]), &pt(&f5, [0, 1, 0])).unwrap();
        let at = |t: i64| chart.point(LineParam::Finite(f5.from_int(t)));
        let inf = chart.point(LineParam::Infinity);
        let x2 = harmonic_conjugate_cr(&f5, &at(0), &inf, &at(2)).unwrap();
        assert_eq!(x2, at(3));

        let f3 = Field::prime(3).unwrap();
        let x = harmonic_conjugate_cr(&f3, &pt(&f3, [1, 0, 0]), &pt(&f3, [0, 1, 0]), &pt(&f3, [1, 2, 0]))
            .unwrap();
        assert_eq!(x, pt(&f3, [1, 1, 0]));

        assert!(matches!(
            harmonic_conjugate_cr(&f3, &pt(&f3, [1, 0, 0]), &pt(&f3, [0, 1, 0]), &pt(&f3, [0, 0, 1])),
            Err(GeometryError::NotCollinear)
        ));
        assert!(matches!(
            harmonic_conjugate_cr(&f3, &pt(&f3, [1, 0, 0]), &pt(&f3, [0, 1, 0]), &pt(&f3, [1, 0, 0])),
            Err(GeometryError::DegeneratePoints(_))
        ));
    }

    #[test]
    fn conjugate_agrees_with_cross_ratio_definition() {
        for f in [Field::prime(5).unwrap(), Field::prime(7).unwrap(), Field::new(3, 2, None).unwrap()] {
            let plane = build_pg(&f).unwrap();
            let minus_one = CrossRatioValue::Finite(f.from_int(-1));
            let s = plane.structure();
            for line in s.lines().iter().take(4) {
                for &y in line {
                    for &z in line {
                        for &x in line {
                            if y == z || y == x || z == x {
                                continue;
                            }
                            let (py, pz, px) = (plane.point(y), plane.point(z), plane.point(x));
                            let c = harmonic_conjugate_cr(&f, &py, &pz, &px).unwrap();
                            assert_eq!(cross_ratio(&f, &py, &pz, &px, &c).unwrap(), minus_one);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_two_conjugates_are_fixed() {
        let f = Field::prime(2).unwrap();
        let plane = build_pg(&f).unwrap();
        let mut triples = 0;
        for line in plane.structure().lines() {
            for &y in line {
                for &z in line {
                    for &x in line {
                        if y == z || y == x || z == x {
                            continue;
                        }
                        triples += 1;
                        assert_eq!(plane.conjugate_index(y, z, x), Some(x));
                    }
                }
            }
        }
        // 7 lines * 3! orderings
        assert_eq!(triples, 42);
    }

    #[test]
    fn involution_and_pair_symmetry_exhaustive() {
        for q in [2u32, 3, 4, 5, 7] {
            let f = if q == 4 { Field::new(2, 2, None).unwrap() } else { Field::prime(q).unwrap() };
            let plane = build_pg(&f).unwrap();
            for line in plane.structure().lines() {
                for &y in line {
                    for &z in line {
                        for &x in line {
                            if y == z || y == x || z == x {
                                continue;
                            }
                            let c = plane.conjugate_index(y, z, x).unwrap();
                            assert_eq!(plane.conjugate_index(y, z, c), Some(x));
                            assert_eq!(plane.conjugate_index(z, y, x), Some(c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pg_counts() {
        for (f, q) in [
            (Field::prime(2).unwrap(), 2usize),
            (Field::prime(3).unwrap(), 3),
            (Field::new(2, 2, None).unwrap(), 4),
            (Field::prime(5).unwrap(), 5),
            (Field::prime(7).unwrap(), 7),
            (Field::new(2, 3, None).unwrap(), 8),
            (Field::new(3, 2, None).unwrap(), 9),
        ] {
            let plane = build_pg(&f).unwrap();
            let s = plane.structure();
            assert_eq!(s.point_count(), q * q + q + 1);
            assert_eq!(s.line_count(), q * q + q + 1);
            assert!(s.lines().iter().all(|l| l.len() == q + 1));
            for p in 0..s.point_count() as u32 {
                assert_eq!(s.lines_through(p).len(), q + 1);
            }
        }
    }

    #[test]
    fn pg_too_large() {
        let f = Field::prime(7).unwrap();
        assert_eq!(
            build_pg_bounded(&f, 5).unwrap_err(),
            GeometryError::TooLarge { order: 7, bound: 5 }
        );
    }

    #[test]
    fn line_indices_match_structure() {
        let f = Field::prime(5).unwrap();
        let plane = build_pg(&f).unwrap();
        for (li, line) in plane.structure().lines().iter().enumerate() {
            let l = plane.line(li as u32);
            for &p in line {
                assert!(incident(&f, &plane.point(p), &l).unwrap());
            }
            assert_eq!(plane.line_index_through(line[0], line[1]), Some(li as u32));
        }
    }

    #[test]
    fn meet_of_two_joins_is_the_shared_point() {
        let f = Field::prime(7).unwrap();
        let plane = build_pg(&f).unwrap();
        let n = plane.point_count() as u32;
        for p in (0..n).step_by(5) {
            for r in (0..n).step_by(7) {
                for s in (0..n).step_by(11) {
                    let (pp, pr, ps) = (plane.point(p), plane.point(r), plane.point(s));
                    if p == r || p == s || r == s || collinear(&f, &pp, &pr, &ps).unwrap() {
                        continue;
                    }
                    let l1 = line_through(&f, &pp, &pr).unwrap();
                    let l2 = line_through(&f, &pp, &ps).unwrap();
                    assert_eq!(meet(&f, &l1, &l2).unwrap(), pp);
                }
            }
        }
    }

    #[test]
    fn extension_field_literals() {
        let f = Field::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let p = ProjPoint::parse(&f, "[1,(0 1),0]").unwrap();
        assert_eq!(p.display(&f), "[1,(0 1),0]");
        let l = ProjLine::parse(&f, "<0,0,2>").unwrap();
        assert_eq!(l.display(&f), "<0,0,1>");
    }
}
