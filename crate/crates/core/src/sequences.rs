//! Conjugate sequences, Möbius harmonic nets, and the check that a modular
//! sequence spans a projective plane of prime order.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::closure::{h_closure, Ambient, ClosureError};
use crate::constructions::reid;
use crate::field::is_prime;
use crate::geometry::CoordinatePlane;
use crate::hp::{hp_classify, hp_search, HarmonicError, HpCheck, HpWitness};
use crate::incidence::IncidenceStructure;
use crate::iso::{iso_find_pinned, DEFAULT_MAX_ISO_POINTS};
use crate::pointset::PointSet;
use crate::report::{ReportBuilder, VerificationReport};

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("points {0}, {1}, {2} are not three distinct points of one long line")]
    NotCollinear(u32, u32, u32),
    #[error("step {index} is ill-posed: the new point equals the base or the previous point")]
    DegenerateStep { index: usize },
    #[error("no repeat within {0} terms")]
    NotModular(usize),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceResult {
    pub base: u32,
    /// `a_0, a_1, ...` up to and including the first repeated term.
    pub terms: Vec<u32>,
    pub modular: bool,
    /// `(n, m)`: `a_n` is the first term equal to an earlier one, `a_m`.
    pub repeat: Option<(usize, usize)>,
    /// `n - m` for a modular sequence.
    pub period: Option<usize>,
}

fn check_collinear(st: &IncidenceStructure, a: u32, b: u32, c: u32) -> Result<(), SequenceError> {
    let n = st.point_count() as u32;
    let distinct = a != b && a != c && b != c && a < n && b < n && c < n;
    match st.line_of(a, b) {
        Some(l) if distinct && st.on_line(c, l) => Ok(()),
        _ => Err(SequenceError::NotCollinear(a, b, c)),
    }
}

/// Generates `a_{i+1}` as the conjugate of `a_{i-1}` with respect to `base`
/// and `a_i`, stopping at the first repeated term or after `limit` terms.
/// `limit` defaults to the line size plus one.
pub fn conjugate_sequence<A: Ambient + ?Sized>(
    amb: &A,
    base: u32,
    a0: u32,
    a1: u32,
    limit: Option<usize>,
) -> Result<SequenceResult, SequenceError> {
    let st = amb.structure();
    check_collinear(st, base, a0, a1)?;
    let line = st.line_of(base, a0).expect("checked");
    let limit = limit.unwrap_or(st.line(line).len() + 1).max(2);
    let mut terms = vec![a0, a1];
    while terms.len() < limit {
        let i = terms.len() - 1;
        let next = amb
            .conjugate(base, terms[i], terms[i - 1])
            .ok_or(SequenceError::DegenerateStep { index: i + 1 })?;
        if next == base || next == terms[i] {
            return Err(SequenceError::DegenerateStep { index: i + 1 });
        }
        terms.push(next);
        if let Some(m) = terms[..i + 1].iter().position(|&t| t == next) {
            let n = i + 1;
            return Ok(SequenceResult {
                base,
                terms,
                modular: true,
                repeat: Some((n, m)),
                period: Some(n - m),
            });
        }
    }
    Ok(SequenceResult {
        base,
        terms,
        modular: false,
        repeat: None,
        period: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NetResult {
    pub net: PointSet,
    /// Whether the seed was already harmonically closed.
    pub closed: bool,
}

/// Harmonic closure of a collinear seed.
pub fn moebius_net<A: Ambient + ?Sized>(amb: &A, seed: &[u32]) -> Result<NetResult, SequenceError> {
    let st = amb.structure();
    let mut pts = seed.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        let pad = |k: usize| pts.get(k).copied().unwrap_or(u32::MAX);
        return Err(SequenceError::NotCollinear(pad(0), pad(1), pad(2)));
    }
    for &c in &pts[2..] {
        check_collinear(st, pts[0], pts[1], c)?;
    }
    let s = st.set_of(pts.iter().copied());
    let t = h_closure(amb, &s)?;
    Ok(NetResult {
        closed: t.final_set == s,
        net: t.final_set,
    })
}

/// The auxiliary points of a modular sequence.
#[derive(Debug, Clone, Serialize)]
pub struct CycleConfiguration {
    pub d: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c0: u32,
    pub c1: u32,
    pub witness: HpWitness,
}

impl CycleConfiguration {
    /// Points in the order `a_0.., b_0.., c_0, c_1, d` used by
    /// [`reid`](crate::constructions::reid).
    pub fn points(&self) -> Vec<u32> {
        let mut v = self.a.clone();
        v.extend(&self.b);
        v.extend([self.c0, self.c1, self.d]);
        v
    }

    /// `{d, b_0, b_1, c_1, c_0, a_1, a_0}`.
    pub fn seed7(&self) -> Vec<u32> {
        vec![self.d, self.b[0], self.b[1], self.c1, self.c0, self.a[1], self.a[0]]
    }
}

/// Builds `a_i, c_0, c_1` from a quadrangle witness for `(d, b_0, b_1)`:
/// `c_1 = o, c_0 = q, a_1 = r, a_0 = s`, then `a_t` is the conjugate of
/// `a_{t-2}` with respect to `d` and `a_{t-1}`.
pub fn cycle_configuration<A: Ambient + ?Sized>(
    amb: &A,
    b: &[u32],
    d: u32,
    w: HpWitness,
) -> Option<CycleConfiguration> {
    let n = b.len();
    let mut a = vec![w.s(), w.r()];
    while a.len() < n {
        let t = a.len();
        a.push(amb.conjugate(d, a[t - 1], a[t - 2])?);
    }
    a.truncate(n);
    Some(CycleConfiguration {
        d,
        a,
        b: b.to_vec(),
        c0: w.q(),
        c1: w.o(),
        witness: w,
    })
}

/// Labeled comparison of the restriction to the configuration with the long
/// lines of R_cycle[n].
pub fn matches_reid(st: &IncidenceStructure, cfg: &CycleConfiguration) -> bool {
    let pts = cfg.points();
    let mut uniq = pts.clone();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() != pts.len() {
        return false;
    }
    let Ok(r) = reid(cfg.b.len() as u32) else { return false };
    let mut want: Vec<Vec<u32>> = r
        .structure
        .lines()
        .iter()
        .map(|l| {
            let mut v: Vec<u32> = l.iter().map(|&k| pts[k as usize]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    want.sort();
    let (sub, old) = st.restrict(&st.set_of(pts.iter().copied()));
    let mut got: Vec<Vec<u32>> = sub
        .lines()
        .iter()
        .map(|l| l.iter().map(|&k| old[k as usize]).collect())
        .collect();
    got.sort();
    got == want
}

/// Runs a conjugate sequence with base `d` and checks that it spans a plane
/// of prime order, following the relabeling `d = base`, `b_i = a_i`.
pub fn verify_sequence_plane(
    plane: &CoordinatePlane,
    base: u32,
    a0: u32,
    a1: u32,
    limit: Option<usize>,
    seed: u64,
) -> Result<VerificationReport, SequenceError> {
    let st = plane.structure();
    let mut rb = ReportBuilder::new("sequence-plane", seed);
    let seq = conjugate_sequence(plane, base, a0, a1, limit)?;
    let Some((rep_n, rep_m)) = seq.repeat else {
        return Err(SequenceError::NotModular(seq.terms.len()));
    };
    let n = rep_n - rep_m;
    rb.size("period", n);
    rb.size("ambient_order", plane.order());
    rb.check("period is prime", is_prime(n as u32), Some(format!("n = {n}")));
    rb.check(
        "b_n = b_0",
        rep_m == 0,
        Some(format!("a_{rep_n} repeats a_{rep_m}")),
    );
    let b: Vec<u32> = seq.terms[..n].to_vec();
    let d = base;
    if n < 2 {
        return Ok(rb.finish());
    }

    let ws = hp_search(st, d, b[0], b[1])?;
    rb.size("witnesses", ws.len());
    if !rb.check("quadrangle exists", !ws.is_empty(), None) {
        return Ok(rb.finish());
    }
    let Some(cfg) = cycle_configuration(plane, &b, d, ws[0]) else {
        rb.check("auxiliary points exist", false, None);
        return Ok(rb.finish());
    };

    let mut lines_ok = true;
    for t in 0..n {
        lines_ok &= st.collinear(cfg.a[t], b[t], cfg.c0);
        lines_ok &= st.collinear(cfg.a[t], b[(t + 1) % n], cfg.c1);
        lines_ok &= st.collinear(d, cfg.a[0], cfg.a[t]) && d != cfg.a[t];
    }
    rb.check("cycle lines", lines_ok, None);
    let a_closes = plane.conjugate(d, cfg.a[n - 1], cfg.a[n - 2]) == Some(cfg.a[0]);
    rb.check("a_n = a_0", a_closes, None);
    let mut hp_ok = true;
    for t in 0..n {
        let tup = [d, b[t], b[(t + 1) % n], cfg.c1, cfg.c0, cfg.a[(t + 1) % n], cfg.a[t]];
        hp_ok &= matches!(hp_classify(st, tup), HpCheck::Hp(_));
    }
    rb.check("HP instances along the cycle", hp_ok, None);

    let labeled = matches_reid(st, &cfg);
    rb.check("restriction is R_cycle[n] (labeled)", labeled, None);
    let e = st.set_of(cfg.points());
    if e.len() <= DEFAULT_MAX_ISO_POINTS {
        let (sub, _) = st.restrict(&e);
        let r = reid(n as u32).expect("n >= 2");
        let iso = iso_find_pinned(&r.structure, &sub, &[], DEFAULT_MAX_ISO_POINTS)
            .ok()
            .flatten()
            .is_some();
        rb.check("restriction is R_cycle[n] (isomorphism)", iso, None);
    }

    let seed7 = st.set_of(cfg.seed7());
    let t7 = h_closure(plane, &seed7)?;
    let closed = &t7.final_set;
    let (sub, _) = st.restrict(closed);
    let pr = sub.plane_check(200, seed);
    rb.size("seed_points", seed7.len());
    rb.size("closure_points", closed.len());
    rb.stages(t7.stages.len());
    rb.check(
        "seed closes to a plane of order n",
        pr.is_plane && pr.order == Some(n as u32) && pr.desargues.all_passed(),
        Some(format!("{} points, order {:?}", closed.len(), pr.order)),
    );
    let te = h_closure(plane, &e)?;
    rb.size("configuration_points", e.len());
    rb.size("configuration_closure_points", te.final_set.len());

    let bline: Vec<u32> = b.iter().copied().chain([d]).collect();
    let net = st.set_of(bline.iter().copied());
    let nt = h_closure(plane, &net)?;
    rb.check("sequence is a Möbius net", nt.final_set == net, None);
    rb.details(json!({
        "d": plane.label(d),
        "b": b.iter().map(|&x| plane.label(x)).collect::<Vec<_>>(),
        "a": cfg.a.iter().map(|&x| plane.label(x)).collect::<Vec<_>>(),
        "c0": plane.label(cfg.c0),
        "c1": plane.label(cfg.c1),
    }));
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::geometry::build_pg;

    fn pg(p: u32, m: u32) -> CoordinatePlane {
        build_pg(&Field::new(p, m, None).unwrap()).unwrap()
    }

    /// `[0,1,0]`, `[1,0,0]`, `[1,1,0]`: parameters ∞, 0, 1 on the line z = 0.
    fn std_seed(pl: &CoordinatePlane) -> (u32, u32, u32) {
        let i = |c| pl.index_of_ints(c).unwrap();
        (i([0, 1, 0]), i([1, 0, 0]), i([1, 1, 0]))
    }

    #[test]
    fn arithmetic_progressions() {
        for (p, m, period) in [(5, 1, 5), (7, 1, 7), (3, 2, 3)] {
            let pl = pg(p, m);
            let (a, x0, x1) = std_seed(&pl);
            let r = conjugate_sequence(&pl, a, x0, x1, None).unwrap();
            assert!(r.modular);
            assert_eq!(r.period, Some(period));
            assert_eq!(r.repeat, Some((period, 0)));
            if m == 1 {
                let labels: Vec<String> = r.terms[..p as usize].iter().map(|&t| pl.label(t)).collect();
                let want: Vec<String> = (0..p).map(|t| format!("[1,{t},0]")).collect();
                assert_eq!(labels, want);
            }
        }
    }

    #[test]
    fn char2_period_two() {
        let pl = pg(2, 2);
        let (a, x0, x1) = std_seed(&pl);
        let r = conjugate_sequence(&pl, a, x0, x1, None).unwrap();
        assert_eq!(r.period, Some(2));
    }

    #[test]
    fn non_collinear_seed() {
        let pl = pg(3, 1);
        let i = |c| pl.index_of_ints(c).unwrap();
        assert!(matches!(
            conjugate_sequence(&pl, i([1, 0, 0]), i([0, 1, 0]), i([0, 0, 1]), None),
            Err(SequenceError::NotCollinear(..))
        ));
    }

    #[test]
    fn nets() {
        let pl = pg(3, 2);
        let (a, x0, x1) = std_seed(&pl);
        let r = moebius_net(&pl, &[a, x0, x1]).unwrap();
        assert_eq!(r.net.len(), 4);
        assert!(!r.closed);
        let again = moebius_net(&pl, &r.net.to_vec()).unwrap();
        assert!(again.closed);

        let pl = pg(5, 1);
        let (a, x0, x1) = std_seed(&pl);
        assert_eq!(moebius_net(&pl, &[a, x0, x1]).unwrap().net.len(), 6);

        let pl = pg(2, 2);
        let (a, x0, x1) = std_seed(&pl);
        let r = moebius_net(&pl, &[a, x0, x1]).unwrap();
        assert!(r.closed);
        assert_eq!(r.net.len(), 3);
    }

    #[test]
    fn sequence_planes() {
        for (p, m, pts) in [(3, 1, 13), (5, 1, 31), (3, 2, 13)] {
            let pl = pg(p, m);
            let (a, x0, x1) = std_seed(&pl);
            let r = verify_sequence_plane(&pl, a, x0, x1, None, 7).unwrap();
            assert_eq!(r.verdict, crate::report::Verdict::Verified, "{:#?}", r.checks);
            assert_eq!(r.sizes["closure_points"], pts);
        }
    }

    #[test]
    fn witness_choice_is_immaterial() {
        for q in [3, 5] {
            let pl = pg(q, 1);
            let st = pl.structure();
            let (d, x0, x1) = std_seed(&pl);
            let seq = conjugate_sequence(&pl, d, x0, x1, None).unwrap();
            let b = &seq.terms[..seq.period.unwrap()];
            let ws = hp_search(st, d, b[0], b[1]).unwrap();
            assert!(!ws.is_empty());
            for w in ws {
                let cfg = cycle_configuration(&pl, b, d, w).unwrap();
                assert!(matches_reid(st, &cfg));
                let t = h_closure(&pl, &st.set_of(cfg.seed7())).unwrap();
                assert_eq!(t.final_set.len() as u32, q * q + q + 1);
            }
        }
    }
}
