//! Verifiers for the closure theorems and the conjugation laws. Each one
//! returns a [`VerificationReport`]; failures are reported, not thrown.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::closure::{h_closure, Ambient, ClosureTrace};
use crate::constructions::{lp, reid_in_lp, LabeledStructure};
use crate::field::{is_prime, Field};
use crate::geometry::{build_pg, dot_raw, harmonic_conjugate_cr, CoordinatePlane};
use crate::hp::{conjugate_search, hp_classify, hp_search, ConjugateStatus, HpCheck, HpWitness};
use crate::pointset::PointSet;
use crate::report::{ReportBuilder, VerificationReport};
use crate::sequences::verify_sequence_plane;

/// Default number of Desargues configurations sampled by plane checks.
pub const DESARGUES_SAMPLES: usize = 200;

fn embedded(which: Result<LabeledStructure, crate::constructions::ConstructionError>) -> Result<(CoordinatePlane, PointSet, LabeledStructure), String> {
    let ls = which.map_err(|e| e.to_string())?;
    let e = ls.embedding.clone().ok_or("structure has no embedding")?;
    let img = e.image();
    Ok((e.ambient, img, ls))
}

fn closure(plane: &CoordinatePlane, s: &PointSet) -> Result<ClosureTrace, String> {
    h_closure(plane, s).map_err(|e| e.to_string())
}

fn labels(plane: &CoordinatePlane, s: &PointSet) -> Vec<String> {
    s.iter().map(|p| plane.label(p)).collect()
}

/// h∞(L_p) in PG(2,p) is the whole plane, and every line `<j,-1,i>` is
/// recovered as the closure of its three L_p points.
pub fn verify_theorem_pp(p: u32, seed: u64) -> VerificationReport {
    let mut rb = ReportBuilder::new("theorem-pp", seed);
    if !is_prime(p) {
        return rb.error(format!("{p} is not prime"));
    }
    let (plane, lp_set, _) = match embedded(lp(p)) {
        Ok(v) => v,
        Err(e) => return rb.error(e),
    };
    let st = plane.structure();
    let f = plane.field().clone();
    let pi = p as i64;
    let trace = match closure(&plane, &lp_set) {
        Ok(t) => t,
        Err(e) => return rb.error(e),
    };
    let fin = &trace.final_set;
    let n = (p * p + p + 1) as usize;
    rb.size("p", p);
    rb.size("seed_points", lp_set.len());
    rb.size("closure_points", fin.len());
    rb.size("plane_points", n);
    rb.stages(trace.stages.len());
    if p == 2 {
        rb.check("L_2 is the whole plane", lp_set.len() == n && trace.stages.is_empty(), None);
    }
    rb.check_with("closure is every plane point", fin.len() == n && fin == &st.full_set(), || {
        json!(labels(&plane, &st.full_set().difference(fin)))
    });
    rb.check("provenance replays", trace.replay(&plane).is_ok(), None);

    let (sub, old) = st.restrict(fin);
    let pr = sub.plane_check(DESARGUES_SAMPLES, seed);
    rb.check_with(
        "closure is a Desarguesian plane of order p",
        pr.is_plane && pr.order == Some(p) && pr.uniform_line_size == Some(p as usize + 1) && pr.desargues.all_passed(),
        || serde_json::to_value(&pr).unwrap_or_default(),
    );
    rb.size("desargues_samples", pr.desargues.samples);

    // closures of the 3-point lines
    let a_pt = |i: i64| plane.index_of_ints([0, i, 1]).expect("point");
    let b_pt = |i: i64| plane.index_of_ints([1, i, 1]).expect("point");
    let c_pt = |i: i64| plane.index_of_ints([1, i, 0]).expect("point");
    let coord_line = |c: [i64; 3]| {
        let l = crate::geometry::ProjLine::from_ints(&f, c).expect("line");
        let idx = plane.line_index_of(&l).expect("same field");
        st.set_of(st.line(idx).iter().copied())
    };
    let mut cji: Vec<Vec<PointSet>> = Vec::with_capacity(p as usize);
    let mut lines_ok = true;
    let mut prop_ok = true;
    let mut first_bad: Option<(i64, i64)> = None;
    for j in 0..pi {
        let mut row = Vec::with_capacity(p as usize);
        for i in 0..pi {
            let small = st.set_of([a_pt(i), b_pt(i + j), c_pt(j)]);
            let c = match closure(&plane, &small) {
                Ok(t) => t.final_set,
                Err(e) => return rb.error(e),
            };
            let line = coord_line([j, -1, i]);
            if c != line {
                lines_ok = false;
                first_bad.get_or_insert((j, i));
            }
            if st.flat_closure(&small).intersection(fin) != c {
                prop_ok = false;
            }
            row.push(c);
        }
        cji.push(row);
    }
    rb.check_with("C(j,i) equals the coordinate line <j,-1,i>", lines_ok, || json!({ "j": first_bad.map(|b| b.0), "i": first_bad.map(|b| b.1) }));
    rb.check("<j,-1,i> = cl(<j,-1,i>_p) ∩ h∞(L_p)", prop_ok, None);

    let mut distinct_meet = true;
    for j in 0..p as usize {
        for i in 0..p as usize {
            for s in 0..p as usize {
                for t in 0..p as usize {
                    if (j, i) >= (s, t) {
                        continue;
                    }
                    let (a, b) = (&cji[j][i], &cji[s][t]);
                    distinct_meet &= a != b && a.intersection(b).len() == 1;
                }
            }
        }
    }
    rb.check("distinct C(j,i) meet in one point", distinct_meet, None);
    let all_lines_inside = (0..st.line_count() as u32).all(|l| st.line(l).iter().all(|&x| fin.contains(x)));
    rb.check("every line <j,k,i> lies in h∞(L_p)", all_lines_inside, None);

    // Incidence through the closed sets: [x,y,z] ∈ <a,b,c> iff xa+yb+zc = 0.
    let mut family: Vec<([i64; 3], PointSet)> = Vec::new();
    for j in 0..pi {
        for i in 0..pi {
            family.push(([j, -1, i], cji[j as usize][i as usize].clone()));
        }
    }
    let top = plane.index_of_ints([0, 1, 0]).expect("point");
    for (coeffs, pts) in [
        ([1, 0, 0], (0..pi).map(a_pt).collect::<Vec<_>>()),
        ([1, 0, -1], (0..pi).map(b_pt).collect()),
        ([0, 0, 1], (0..pi).map(c_pt).collect()),
    ] {
        let s = st.set_of(pts.into_iter().chain([top]));
        match closure(&plane, &s) {
            Ok(t) => family.push((coeffs, t.final_set)),
            Err(e) => return rb.error(e),
        }
    }
    let mut product_ok = true;
    for (c, set) in &family {
        let l = [f.int_raw(c[0]), f.int_raw(c[1]), f.int_raw(c[2])];
        for x in fin.iter() {
            product_ok &= set.contains(x) == (dot_raw(&f, &plane.raw_point(x), &l) == 0);
        }
    }
    rb.check("membership in <a,b,c> iff xa+yb+zc = 0", product_ok, None);

    let mut closed = true;
    for line in sub.lines() {
        let s = st.set_of(line.iter().map(|&k| old[k as usize]));
        match closure(&plane, &s) {
            Ok(t) => closed &= t.final_set == s,
            Err(e) => return rb.error(e),
        }
    }
    rb.check("every line of the closure is harmonically closed", closed, None);
    rb.check("the closure is harmonically closed", closure(&plane, fin).map(|t| &t.final_set == fin).unwrap_or(false), None);
    rb.finish()
}

/// h∞(R_cycle[p]) = h∞(L_p), and deleting any point of R_cycle[p] shrinks
/// the closure.
pub fn verify_minimality(p: u32, seed: u64) -> VerificationReport {
    let mut rb = ReportBuilder::new("minimality", seed);
    if p == 2 || !is_prime(p) {
        return rb.error(format!("minimality needs an odd prime, got {p}"));
    }
    let (plane, lp_set, _) = match embedded(lp(p)) {
        Ok(v) => v,
        Err(e) => return rb.error(e),
    };
    let (_, r_set, _) = match embedded(reid_in_lp(p)) {
        Ok(v) => v,
        Err(e) => return rb.error(e),
    };
    let st = plane.structure();
    let (tl, tr) = match (closure(&plane, &lp_set), closure(&plane, &r_set)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return rb.error(e),
    };
    rb.size("p", p);
    rb.size("seed_points", r_set.len());
    rb.size("closure_points", tr.final_set.len());
    rb.size("lp_closure_points", tl.final_set.len());
    rb.stages(tr.stages.len());
    rb.check("h∞(R_cycle[p]) = h∞(L_p)", tr.final_set == tl.final_set, None);
    rb.check_with("h∞(R_cycle[p]) contains L_p", lp_set.is_subset(&tr.final_set), || {
        json!(labels(&plane, &lp_set.difference(&tr.final_set)))
    });
    let full = st.full_set();
    let mut sizes = Vec::new();
    let mut all_proper = true;
    let mut offender = None;
    for x in r_set.iter() {
        let mut s = r_set.clone();
        s.remove(x);
        let t = match closure(&plane, &s) {
            Ok(t) => t,
            Err(e) => return rb.error(e),
        };
        let proper = t.final_set.is_subset(&full) && t.final_set.len() < full.len();
        if !proper && offender.is_none() {
            offender = Some(plane.label(x));
        }
        all_proper &= proper;
        sizes.push(json!({ "deleted": plane.label(x), "closure_points": t.final_set.len() }));
    }
    rb.size("deletions", sizes.len());
    rb.check("every single deletion gives a smaller closure", all_proper, offender);
    rb.details(json!({ "deletions": sizes }));
    rb.finish()
}

/// Failure of one conjugation law on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct LawFailure {
    pub law: &'static str,
    pub witness: HpWitness,
    pub x_conj: Option<u32>,
}

/// Counts from [`check_laws`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct LawSummary {
    pub instances: usize,
    pub failures: Vec<LawFailure>,
    pub failure_count: usize,
}

pub const LAW_NAMES: [&str; 8] = [
    "conjugate of x' is x",
    "Hc(y,z;x,x') implies Hc(x,x';y,z)",
    "conj(y,r;s) collinear with q and x'",
    "conj(y,o;q) on cl{s,x'}",
    "conj(z,r;q) on cl{s,x'}",
    "conj(o,r;x') on cl{q,x}",
    "relabeled tuples are in harmonic position",
    "witness meet equals the conjugate",
];

/// Checks the conjugation laws on one witness.
pub fn laws_for_witness<A: Ambient + ?Sized>(amb: &A, w: &HpWitness, out: &mut LawSummary) {
    let st = amb.structure();
    let [y, x, z, o, q, r, s] = w.points;
    out.instances += 1;
    let mut fail = |law: usize, xc: Option<u32>| {
        out.failure_count += 1;
        if out.failures.len() < 32 {
            out.failures.push(LawFailure {
                law: LAW_NAMES[law],
                witness: *w,
                x_conj: xc,
            });
        }
    };
    let Some(xc) = amb.conjugate(y, z, x) else {
        fail(0, None);
        return;
    };
    if w.conjugate_in(st) != Some(xc) {
        fail(7, Some(xc));
    }
    if amb.conjugate(y, z, xc) != Some(x) {
        fail(0, Some(xc));
    }
    if xc != x && amb.conjugate(x, xc, y) != Some(z) {
        fail(1, Some(xc));
    }
    match amb.conjugate(y, r, s) {
        Some(t) if st.collinear(q, xc, t) => {}
        _ => fail(2, Some(xc)),
    }
    match amb.conjugate(y, o, q) {
        Some(q1) if st.collinear(s, xc, q1) => {}
        _ => fail(3, Some(xc)),
    }
    match amb.conjugate(z, r, q) {
        Some(q2) if st.collinear(s, xc, q2) => {}
        _ => fail(4, Some(xc)),
    }
    match amb.conjugate(o, r, xc) {
        Some(u) if st.collinear(q, x, u) => {}
        _ => fail(5, Some(xc)),
    }
    let relabeled = [
        [y, s, r, xc, z, q, o],
        [y, q, o, xc, z, s, r],
        [y, xc, z, q, o, s, r],
    ];
    if !relabeled.iter().all(|t| matches!(hp_classify(st, *t), HpCheck::Hp(_))) {
        fail(6, Some(xc));
    }
}

/// All ordered triples `(y, x, z)` of distinct points on a common long line.
pub fn collinear_triples(st: &crate::incidence::IncidenceStructure) -> Vec<[u32; 3]> {
    let mut v = Vec::new();
    for line in st.lines() {
        for &y in line {
            for &x in line {
                for &z in line {
                    if y != x && y != z && x != z {
                        v.push([y, x, z]);
                    }
                }
            }
        }
    }
    v
}

/// Conjugation laws over all witnesses of all triples (`samples = None`),
/// or over `samples` random (triple, witness) instances.
pub fn check_laws<A: Ambient + ?Sized>(amb: &A, samples: Option<usize>, seed: u64) -> LawSummary {
    let st = amb.structure();
    let triples = collinear_triples(st);
    let mut out = LawSummary::default();
    match samples {
        None => {
            for [y, x, z] in triples {
                for w in hp_search(st, y, x, z).expect("collinear triple") {
                    laws_for_witness(amb, &w, &mut out);
                }
            }
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while out.instances < k {
                let [y, x, z] = *triples.choose(&mut rng).expect("plane has lines");
                let ws = hp_search(st, y, x, z).expect("collinear triple");
                if let Some(w) = ws.choose(&mut rng) {
                    laws_for_witness(amb, w, &mut out);
                }
            }
        }
    }
    out
}

/// Quadrangle conjugates against the cross-ratio oracle.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OracleSummary {
    pub triples: usize,
    pub witnesses: usize,
    pub failures: Vec<[u32; 3]>,
    pub failure_count: usize,
}

pub fn oracle_agreement(plane: &CoordinatePlane, samples: Option<usize>, seed: u64) -> OracleSummary {
    let st = plane.structure();
    let f = plane.field();
    let triples = collinear_triples(st);
    let mut out = OracleSummary::default();
    let one = |t: [u32; 3], out: &mut OracleSummary| {
        let [y, x, z] = t;
        out.triples += 1;
        let r = conjugate_search(st, y, z, x).expect("collinear triple");
        out.witnesses += r.witnesses;
        let cr = harmonic_conjugate_cr(f, &plane.point(y), &plane.point(z), &plane.point(x))
            .ok()
            .and_then(|pt| plane.index_of(&pt).ok());
        let ok = r.status == ConjugateStatus::Unique && r.unresolved == 0 && r.conjugate.is_some() && r.conjugate == cr;
        if !ok {
            out.failure_count += 1;
            if out.failures.len() < 32 {
                out.failures.push(t);
            }
        }
    };
    match samples {
        None => {
            for t in triples.iter().copied() {
                one(t, &mut out);
            }
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..k {
                one(*triples.choose(&mut rng).expect("plane has lines"), &mut out);
            }
        }
    }
    out
}

/// Conjugation laws in PG(2,p): exhaustive for p <= 3, otherwise sampled.
pub fn verify_symmetry(plane: &CoordinatePlane, samples: usize, seed: u64) -> VerificationReport {
    let mut rb = ReportBuilder::new("symmetry", seed);
    let exhaustive = plane.order() <= 3;
    let sum = check_laws(plane, if exhaustive { None } else { Some(samples) }, seed);
    rb.size("order", plane.order());
    rb.size("instances", sum.instances);
    rb.size("exhaustive", exhaustive);
    let ok = sum.failure_count == 0 && sum.instances > 0;
    rb.check_with("conjugation laws", ok, || serde_json::to_value(&sum.failures).unwrap_or_default());
    rb.finish()
}

/// Quadrangle search against cross ratio: exhaustive for q <= 5.
pub fn verify_oracle(plane: &CoordinatePlane, samples: usize, seed: u64) -> VerificationReport {
    let mut rb = ReportBuilder::new("oracle-agreement", seed);
    let exhaustive = plane.order() <= 5;
    let sum = oracle_agreement(plane, if exhaustive { None } else { Some(samples) }, seed);
    rb.size("order", plane.order());
    rb.size("triples", sum.triples);
    rb.size("witnesses", sum.witnesses);
    rb.size("exhaustive", exhaustive);
    rb.check_with("quadrangle conjugate = cross-ratio conjugate", sum.failure_count == 0, || {
        json!(sum.failures)
    });
    rb.finish()
}

/// PG(2,p) over the prime field, as a report-friendly result.
pub fn prime_plane(p: u32) -> Result<CoordinatePlane, String> {
    let f = Field::prime(p).map_err(|e| e.to_string())?;
    build_pg(&f).map_err(|e| e.to_string())
}

/// Sequence-plane check with the standard seeding `A = [0,1,0]`,
/// `a_0 = [1,0,0]`, `a_1 = [1,1,0]`.
pub fn verify_sequence_plane_std(plane: &CoordinatePlane, seed: u64) -> VerificationReport {
    let idx = |c| plane.index_of_ints(c).expect("point");
    match verify_sequence_plane(plane, idx([0, 1, 0]), idx([1, 0, 0]), idx([1, 1, 0]), None, seed) {
        Ok(r) => r,
        Err(e) => ReportBuilder::new("sequence-plane", seed).error(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn theorem_pp_small() {
        for p in [2, 3, 5] {
            let r = verify_theorem_pp(p, 1);
            assert_eq!(r.verdict, Verdict::Verified, "{p}: {:#?}", r.checks);
            assert_eq!(r.sizes["closure_points"], p * p + p + 1);
        }
        assert_eq!(verify_theorem_pp(2, 1).stages, Some(0));
        assert_eq!(verify_theorem_pp(4, 1).verdict, Verdict::Error);
    }

    #[test]
    fn minimality_small() {
        // The equality half holds. The deletion half does not: R_cycle[3]
        // minus a_2 still contains the 7-point seed {d,b0,b1,c1,c0,a1,a0},
        // whose closure is already the whole plane.
        let r = verify_minimality(3, 1);
        assert_eq!(r.sizes["deletions"], 9);
        assert!(r.checks[0].passed && r.checks[1].passed);
        assert_eq!(r.verdict, Verdict::Falsified);
        let ls = reid_in_lp(3).unwrap();
        let e = ls.embedding.unwrap();
        let st = e.ambient.structure();
        let names = ["d", "b0", "b1", "c1", "c0", "a1", "a0"];
        // reid_in_lp keeps the point order of reid
        let abstract_r = crate::constructions::reid(3).unwrap().structure;
        let seed7 = st.set_of(names.iter().map(|n| e.map[abstract_r.find_label(n).unwrap() as usize]));
        assert_eq!(closure(&e.ambient, &seed7).unwrap().final_set.len(), 13);
        assert_eq!(verify_minimality(2, 1).verdict, Verdict::Error);
    }

    #[test]
    fn laws_pg3_exhaustive() {
        let pl = prime_plane(3).unwrap();
        let s = check_laws(&pl, None, 0);
        assert!(s.instances > 0);
        assert_eq!(s.failure_count, 0, "{:?}", s.failures);
    }

    #[test]
    fn laws_hold_in_char2() {
        let pl = prime_plane(2).unwrap();
        let s = check_laws(&pl, None, 0);
        assert_eq!(s.failure_count, 0, "{:?}", s.failures);
    }

    #[test]
    fn oracle_small() {
        for q in [2, 3] {
            let pl = prime_plane(q).unwrap();
            let s = oracle_agreement(&pl, None, 0);
            assert_eq!(s.failure_count, 0);
        }
    }
}
