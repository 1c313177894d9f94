//! Staged construction of PG(2,p) from L_p by harmonic conjugation.
//!
//! Affine points are named `[1, a, -k]`. The families `k = -1` (`[1,a,1]`)
//! and `k = 0` (`[1,a,0]`) are points of L_p. For `k = 1, ..., p-1`, and each
//! `i, j` in Z_p, the point named `[1, j-ki, -k]` is produced as the
//! conjugate of `[1, j-(k-2)i+2s, -(k-2)]` with respect to `[0,i+s,1]` and
//! `[1, j-(k-1)i+s, -(k-1)]`, for every `s != 0`, inside the quadrangle
//!
//! ```text
//! HP([0,i+s,1], [1,j-(k-2)i+2s,-(k-2)], [1,j-(k-1)i+s,-(k-1)];
//!    [0,i,1], [0,1,0], [1,j-(k-1)i,-(k-1)], [1,j-(k-2)i+s,-(k-2)])
//! ```
//!
//! Only previously named points enter a step. After each family the four
//! incidence claims are checked in the ambient, and the named points are
//! compared with their coordinates. The family `k = p-1` must reproduce
//! `k = -1`.

use serde::Serialize;
use thiserror::Error;

use crate::closure::{h_closure, Ambient, ConjugateMethod, SearchAmbient};
use crate::constructions::{lp, ConstructionError};
use crate::field::is_prime;
use crate::geometry::CoordinatePlane;
use crate::hp::{hp_classify, HpCheck, HpClass};
use crate::pointset::PointSet;

/// Largest prime accepted by [`staged_synthesis`].
pub const DEFAULT_MAX_SYNTHESIS_PRIME: u32 = 31;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("synthesis needs an odd prime, got {0}")]
    NotOddPrime(u32),
    #[error("prime {p} exceeds the synthesis bound {bound}")]
    TooLarge { p: u32, bound: u32 },
    #[error("claim {claim} failed at k = {k}: {detail}")]
    ClaimFailed {
        k: i64,
        claim: String,
        detail: String,
        certificate: Box<SynthesisCertificate>,
    },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// One conjugation producing a named point.
#[derive(Debug, Clone, Serialize)]
pub struct ConjStep {
    pub i: u32,
    pub j: u32,
    pub s: u32,
    /// `(y, x, z, o, q, r, s)` as ambient point indices.
    pub hp: [u32; 7],
    pub class: HpClass,
    pub result: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthPoint {
    /// Symbolic name `[1,a,-k]`.
    pub name: String,
    pub a: u32,
    pub point: u32,
    /// Coordinate label of the ambient point.
    pub label: String,
    pub coordinate_match: bool,
    pub steps: Vec<ConjStep>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ClaimRecord {
    /// Intersection of the closed lines `<j+kt,-1,i+t>` is the named point.
    pub intersection: bool,
    /// `{[0,i+t,1], [1,j+kt,0], [1,j-ki,-k]}` collinear.
    pub collinear_triples: bool,
    /// The new points differ from all earlier ones (not checked at the
    /// wrap-around family).
    pub new_points: Option<bool>,
    /// `{[1,t,-k]} ∪ {[0,1,0]}` collinear.
    pub family_line: bool,
    /// All `(i, j)` naming one point agree, and the result is independent
    /// of `s`.
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthStage {
    pub k: i64,
    pub points: Vec<SynthPoint>,
    pub claims: ClaimRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisCertificate {
    pub p: u32,
    pub method: ConjugateMethod,
    pub stages: Vec<SynthStage>,
    /// `[1, j-(p-1)i, -(p-1)] = [1, j+i, 1]` for all `i, j`.
    pub wrap_check: Option<bool>,
    /// Points of L_p plus all named points.
    pub covered: usize,
    pub plane_points: usize,
}

impl SynthesisCertificate {
    pub fn all_passed(&self) -> bool {
        self.wrap_check == Some(true)
            && self.covered == self.plane_points
            && self.stages.iter().all(|st| {
                let c = &st.claims;
                c.intersection
                    && c.collinear_triples
                    && c.new_points != Some(false)
                    && c.family_line
                    && c.consistent
                    && st.points.iter().all(|p| p.coordinate_match)
            })
    }
}

struct Names {
    p: u32,
    /// `table[(k+1) * p + a]`, `k` in `-1..=p-1`.
    table: Vec<Option<u32>>,
}

impl Names {
    fn get(&self, a: i64, k: i64) -> u32 {
        self.table[self.slot(a, k)].expect("named point used before it exists")
    }
    fn slot(&self, a: i64, k: i64) -> usize {
        let p = self.p as i64;
        ((k + 1) * p + a.rem_euclid(p)) as usize
    }
}

/// Runs the synthesis with coordinate conjugation.
pub fn staged_synthesis(p: u32) -> Result<SynthesisCertificate, SynthesisError> {
    staged_synthesis_with(p, ConjugateMethod::Coordinate, DEFAULT_MAX_SYNTHESIS_PRIME)
}

/// Runs the synthesis, conjugating either with the coordinate formula or by
/// quadrangle search in the plane's incidence structure.
pub fn staged_synthesis_with(
    p: u32,
    method: ConjugateMethod,
    max_p: u32,
) -> Result<SynthesisCertificate, SynthesisError> {
    if p == 2 || !is_prime(p) {
        return Err(SynthesisError::NotOddPrime(p));
    }
    if p > max_p {
        return Err(SynthesisError::TooLarge { p, bound: max_p });
    }
    let l = lp(p)?;
    let emb = l.embedding.expect("lp is embedded");
    let plane: &CoordinatePlane = &emb.ambient;
    let st = plane.structure();
    let search = SearchAmbient(st);
    let amb: &dyn Ambient = match method {
        ConjugateMethod::Coordinate => plane,
        ConjugateMethod::Quadrangle => &search,
    };

    let pi = p as i64;
    let md = |v: i64| v.rem_euclid(pi) as u32;
    let a_pt = |i: i64| emb.map[md(i) as usize]; // [0,i,1]
    let top = emb.map[3 * p as usize]; // [0,1,0]

    let mut names = Names {
        p,
        table: vec![None; ((p + 1) * p) as usize],
    };
    for a in 0..pi {
        let s1 = names.slot(a, -1);
        names.table[s1] = Some(emb.map[(p as i64 + a) as usize]);
        let s0 = names.slot(a, 0);
        names.table[s0] = Some(emb.map[(2 * p as i64 + a) as usize]);
    }

    // h∞(<J,-1,I>_p), indexed by [J][I]
    let mut closed_lines: Vec<Vec<PointSet>> = Vec::with_capacity(p as usize);
    for jj in 0..pi {
        let mut row = Vec::with_capacity(p as usize);
        for ii in 0..pi {
            let seed = st.set_of([a_pt(ii), names.get(ii + jj, -1), names.get(jj, 0)]);
            let t = h_closure(amb, &seed).expect("closure of a line terminates");
            row.push(t.final_set);
        }
        closed_lines.push(row);
    }

    let mut cert = SynthesisCertificate {
        p,
        method,
        stages: Vec::new(),
        wrap_check: None,
        covered: 0,
        plane_points: st.point_count(),
    };
    let fail = |cert: &SynthesisCertificate, k: i64, claim: &str, detail: String| SynthesisError::ClaimFailed {
        k,
        claim: claim.to_string(),
        detail,
        certificate: Box::new(cert.clone()),
    };

    for k in 1..pi {
        let mut steps: Vec<Vec<ConjStep>> = vec![Vec::new(); p as usize];
        let mut produced: Vec<Option<u32>> = vec![None; p as usize];
        let mut consistent = true;
        let mut detail = String::new();
        for i in 0..pi {
            for j in 0..pi {
                let mut result: Option<u32> = None;
                for s in 1..pi {
                    let t = [
                        a_pt(i + s),
                        names.get(j - (k - 2) * i + 2 * s, k - 2),
                        names.get(j - (k - 1) * i + s, k - 1),
                        a_pt(i),
                        top,
                        names.get(j - (k - 1) * i, k - 1),
                        names.get(j - (k - 2) * i + s, k - 2),
                    ];
                    let class = match hp_classify(st, t) {
                        HpCheck::Hp(c) => c,
                        HpCheck::NotHp(why) => {
                            return Err(fail(
                                &cert,
                                k,
                                "harmonic position",
                                format!("i={i} j={j} s={s}: {why}"),
                            ))
                        }
                    };
                    let Some(xs) = amb.conjugate(t[0], t[2], t[1]) else {
                        return Err(fail(&cert, k, "conjugate", format!("i={i} j={j} s={s}: none")));
                    };
                    match result {
                        None => result = Some(xs),
                        Some(prev) if prev != xs => {
                            consistent = false;
                            detail = format!("i={i} j={j}: s=1 gives {prev}, s={s} gives {xs}");
                        }
                        _ => {}
                    }
                    let a = md(j - k * i);
                    steps[a as usize].push(ConjStep {
                        i: md(i),
                        j: md(j),
                        s: md(s),
                        hp: t,
                        class,
                        result: xs,
                    });
                }
                let a = md(j - k * i) as usize;
                let x = result.expect("p >= 3 gives at least one s");
                match produced[a] {
                    None => produced[a] = Some(x),
                    Some(prev) if prev != x => {
                        consistent = false;
                        detail = format!("name [1,{a},-{k}] gets {prev} and {x}");
                    }
                    _ => {}
                }
            }
        }
        if !consistent {
            return Err(fail(&cert, k, "consistency", detail));
        }
        for a in 0..pi {
            let s = names.slot(a, k);
            names.table[s] = produced[a as usize];
        }

        let mut claims = ClaimRecord {
            consistent,
            ..ClaimRecord::default()
        };
        // (i)
        claims.intersection = (0..pi).all(|i| {
            (0..pi).all(|j| {
                let mut acc = st.full_set();
                for t in 0..pi {
                    acc.intersect_with(&closed_lines[md(j + k * t) as usize][md(i + t) as usize]);
                }
                acc.len() == 1 && acc.contains(names.get(j - k * i, k))
            })
        });
        // (ii)
        claims.collinear_triples = (0..pi).all(|i| {
            (0..pi).all(|j| {
                (0..pi).all(|t| st.collinear(a_pt(i + t), names.get(j + k * t, 0), names.get(j - k * i, k)))
            })
        });
        // (iii)
        if k <= pi - 2 {
            let mut earlier: Vec<u32> = (0..pi).map(a_pt).collect();
            earlier.push(top);
            for kk in -1..k {
                earlier.extend((0..pi).map(|a| names.get(a, kk)));
            }
            let mut fam: Vec<u32> = (0..pi).map(|a| names.get(a, k)).collect();
            let fresh = fam.iter().all(|x| !earlier.contains(x));
            fam.sort_unstable();
            fam.dedup();
            claims.new_points = Some(fresh && fam.len() == p as usize);
        }
        // (iv)
        let fam = st.set_of((0..pi).map(|a| names.get(a, k)).chain([top]));
        claims.family_line = fam.len() == p as usize + 1 && st.rank(&fam) == 2;

        let points = (0..pi)
            .map(|a| {
                let point = names.get(a, k);
                let want = plane
                    .index_of_ints([1, a, -k])
                    .expect("nonzero coordinates");
                SynthPoint {
                    name: format!("[1,{a},-{k}]"),
                    a: a as u32,
                    point,
                    label: plane.label(point),
                    coordinate_match: point == want,
                    steps: std::mem::take(&mut steps[a as usize]),
                }
            })
            .collect::<Vec<_>>();
        let stage = SynthStage { k, points, claims };
        let bad = {
            let c = &stage.claims;
            if !c.intersection {
                Some("(i) intersection")
            } else if !c.collinear_triples {
                Some("(ii) collinear triples")
            } else if c.new_points == Some(false) {
                Some("(iii) new points")
            } else if !c.family_line {
                Some("(iv) family line")
            } else if stage.points.iter().any(|p| !p.coordinate_match) {
                Some("coordinate match")
            } else {
                None
            }
        };
        cert.stages.push(stage);
        if let Some(claim) = bad {
            return Err(fail(&cert, k, claim, String::new()));
        }
    }

    let wrap = (0..pi).all(|i| (0..pi).all(|j| names.get(j - (pi - 1) * i, pi - 1) == names.get(j + i, -1)));
    cert.wrap_check = Some(wrap);
    let mut covered = emb.image();
    for k in 1..pi - 1 {
        for a in 0..pi {
            covered.insert(names.get(a, k));
        }
    }
    cert.covered = covered.len();
    if !wrap {
        return Err(fail(&cert, pi - 1, "wrap-around", String::new()));
    }
    if cert.covered != cert.plane_points {
        let detail = format!("{} of {} points", cert.covered, cert.plane_points);
        return Err(fail(&cert, pi - 1, "coverage", detail));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_one_stage() {
        let c = staged_synthesis(3).unwrap();
        assert!(c.all_passed());
        // k = 1 creates the new points, k = 2 is the wrap-around
        assert_eq!(c.stages.len(), 2);
        assert_eq!(c.stages[0].points.len(), 3);
        assert_eq!(c.covered, 13);
        let labels: Vec<&str> = c.stages[0].points.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, vec!["[1,0,2]", "[1,1,2]", "[1,2,2]"]);
    }

    #[test]
    fn p5_and_p7() {
        for p in [5, 7] {
            let c = staged_synthesis(p).unwrap();
            assert!(c.all_passed());
            let new_points: usize = c.stages.iter().filter(|s| s.k <= p as i64 - 2).map(|s| s.points.len()).sum();
            assert_eq!(new_points as u32 + 3 * p + 1, p * p + p + 1);
            assert_eq!(c.wrap_check, Some(true));
        }
    }

    #[test]
    fn quadrangle_method_agrees() {
        for p in [3, 5] {
            let a = staged_synthesis_with(p, ConjugateMethod::Quadrangle, 31).unwrap();
            let b = staged_synthesis(p).unwrap();
            let pa: Vec<u32> = a.stages.iter().flat_map(|s| s.points.iter().map(|p| p.point)).collect();
            let pb: Vec<u32> = b.stages.iter().flat_map(|s| s.points.iter().map(|p| p.point)).collect();
            assert_eq!(pa, pb);
        }
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(matches!(staged_synthesis(2), Err(SynthesisError::NotOddPrime(2))));
        assert!(matches!(staged_synthesis(9), Err(SynthesisError::NotOddPrime(9))));
        assert!(matches!(
            staged_synthesis_with(37, ConjugateMethod::Coordinate, 31),
            Err(SynthesisError::TooLarge { .. })
        ));
    }
}
