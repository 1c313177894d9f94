//! The harmonic-closure operator: one step `h`, and the fixpoint `h∞` with a
//! per-stage provenance trace.
//!
//! `h(S)` adds, for every unordered collinear triple `{a, b, c}` of `S` and
//! each choice of middle element `b`, the conjugate of `b` with respect to
//! `a` and `c`. The fixpoint driver works line by line and only re-examines
//! triples that contain a point added in the previous stage, so stage `n` of
//! the trace is exactly `hⁿ(S)`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::CoordinatePlane;
use crate::hp::{harmonic_audit, AuditReport, HarmonicError};
use crate::incidence::IncidenceStructure;
use crate::pointset::PointSet;

#[derive(Debug, Error)]
pub enum ClosureError {
    #[error("ambient structure is not harmonic ({0})")]
    AmbientNotHarmonic(String),
    #[error("closure still growing after {} stages", .0.stages.len())]
    StageLimitExceeded(Box<ClosureTrace>),
    #[error("point set has capacity {got}, ambient has {want} points")]
    WrongCapacity { got: usize, want: usize },
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateMethod {
    /// Homogeneous-coordinate formula (agrees with the cross-ratio oracle).
    Coordinate,
    /// Quadrangle search in an audited structure.
    Quadrangle,
}

/// A harmonic matroid that can supply conjugates.
pub trait Ambient {
    fn structure(&self) -> &IncidenceStructure;

    /// Conjugate of `x` with respect to `y` and `z`, or `None` when the
    /// three points are not distinct and collinear.
    fn conjugate(&self, y: u32, z: u32, x: u32) -> Option<u32>;

    fn method(&self) -> ConjugateMethod;
}

impl Ambient for CoordinatePlane {
    fn structure(&self) -> &IncidenceStructure {
        CoordinatePlane::structure(self)
    }

    #[inline]
    fn conjugate(&self, y: u32, z: u32, x: u32) -> Option<u32> {
        self.conjugate_index(y, z, x)
    }

    fn method(&self) -> ConjugateMethod {
        ConjugateMethod::Coordinate
    }
}

/// An abstract structure that passed [`harmonic_audit`]; conjugates come
/// from the audit's quadrangle search.
#[derive(Debug, Clone)]
pub struct AuditedAmbient {
    structure: IncidenceStructure,
    report: AuditReport,
}

impl AuditedAmbient {
    pub fn new(structure: IncidenceStructure, max_points: usize) -> Result<AuditedAmbient, ClosureError> {
        let report = harmonic_audit(&structure, max_points)?;
        if !report.is_harmonic() {
            return Err(ClosureError::AmbientNotHarmonic(format!(
                "{:?}: {} disagreeing triples, {} triples with missing meets",
                report.verdict,
                report.disagreements.len(),
                report.unresolved_count
            )));
        }
        Ok(AuditedAmbient { structure, report })
    }

    pub fn report(&self) -> &AuditReport {
        &self.report
    }
}

impl Ambient for AuditedAmbient {
    fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    fn conjugate(&self, y: u32, z: u32, x: u32) -> Option<u32> {
        self.report.conjugates.get(&(y, z, x)).copied()
    }

    fn method(&self) -> ConjugateMethod {
        ConjugateMethod::Quadrangle
    }
}

/// Runs [`conjugate_search`](crate::hp::conjugate_search) on demand, with no
/// audit. Intended for structures known to be harmonic, such as a coordinate
/// plane's incidence structure, when the coordinate formula is to be avoided.
#[derive(Debug, Clone, Copy)]
pub struct SearchAmbient<'a>(pub &'a IncidenceStructure);

impl Ambient for SearchAmbient<'_> {
    fn structure(&self) -> &IncidenceStructure {
        self.0
    }

    fn conjugate(&self, y: u32, z: u32, x: u32) -> Option<u32> {
        let r = crate::hp::conjugate_search(self.0, y, z, x).ok()?;
        match r.status {
            crate::hp::ConjugateStatus::Unique => r.conjugate,
            _ => None,
        }
    }

    fn method(&self) -> ConjugateMethod {
        ConjugateMethod::Quadrangle
    }
}

fn check_capacity<A: Ambient + ?Sized>(amb: &A, s: &PointSet) -> Result<(), ClosureError> {
    let want = amb.structure().point_count();
    if s.capacity() != want {
        return Err(ClosureError::WrongCapacity {
            got: s.capacity(),
            want,
        });
    }
    Ok(())
}

/// Points of `s` grouped by the long lines they lie on; only lines with at
/// least three members are kept.
fn bucket(st: &IncidenceStructure, s: &PointSet) -> HashMap<u32, Vec<u32>> {
    let mut map: HashMap<u32, Vec<u32>> = HashMap::new();
    for p in s.iter() {
        for &l in st.lines_through(p) {
            map.entry(l).or_default().push(p);
        }
    }
    map.retain(|_, v| v.len() >= 3);
    map
}

/// One application of `h`.
pub fn h_step<A: Ambient + ?Sized>(amb: &A, s: &PointSet) -> Result<PointSet, ClosureError> {
    check_capacity(amb, s)?;
    let st = amb.structure();
    let mut out = s.clone();
    let mut lines: Vec<(u32, Vec<u32>)> = bucket(st, s).into_iter().collect();
    lines.sort_unstable_by_key(|(l, _)| *l);
    for (_, m) in lines {
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                for k in j + 1..m.len() {
                    let (a, b, c) = (m[i], m[j], m[k]);
                    for (e1, mid, e2) in [(a, b, c), (b, a, c), (a, c, b)] {
                        if let Some(x) = amb.conjugate(e1, e2, mid) {
                            out.insert(x);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A point added by the closure and one triple that produced it: `point` is
/// the conjugate of `b` with respect to `a` and `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Added {
    pub point: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub stage: usize,
    pub added: Vec<Added>,
}

/// Provenance record of a closure run.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureTrace {
    pub method: ConjugateMethod,
    pub initial: PointSet,
    pub stages: Vec<Stage>,
    #[serde(rename = "final")]
    pub final_set: PointSet,
    pub fixpoint: bool,
}

impl ClosureTrace {
    /// `hⁿ(S)` for `n` up to the number of recorded stages.
    pub fn after_stage(&self, n: usize) -> PointSet {
        let mut s = self.initial.clone();
        for st in self.stages.iter().take(n) {
            for a in &st.added {
                s.insert(a.point);
            }
        }
        s
    }

    /// Re-derives every recorded addition from its triple. Returns the first
    /// mismatch as `(stage, point)`.
    pub fn replay<A: Ambient + ?Sized>(&self, amb: &A) -> Result<(), (usize, u32)> {
        let st = amb.structure();
        let mut cur = self.initial.clone();
        for stage in &self.stages {
            let before = cur.clone();
            for a in &stage.added {
                let ok = before.contains(a.a)
                    && before.contains(a.b)
                    && before.contains(a.c)
                    && !before.contains(a.point)
                    && st.collinear(a.a, a.b, a.c)
                    && amb.conjugate(a.a, a.c, a.b) == Some(a.point);
                if !ok || !cur.insert(a.point) {
                    return Err((stage.stage, a.point));
                }
            }
        }
        if cur != self.final_set {
            return Err((self.stages.len(), u32::MAX));
        }
        Ok(())
    }
}

/// Options for [`h_closure_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosureOptions {
    /// Defaults to the ambient point count.
    pub max_stages: Option<usize>,
    /// Shuffles the order lines and triples are processed in.
    pub shuffle_seed: Option<u64>,
}

/// `h∞(S)` with the default stage bound.
pub fn h_closure<A: Ambient + ?Sized>(amb: &A, s: &PointSet) -> Result<ClosureTrace, ClosureError> {
    h_closure_with(amb, s, ClosureOptions::default())
}

/// Iterates `h` to a fixpoint.
pub fn h_closure_with<A: Ambient + ?Sized>(
    amb: &A,
    s: &PointSet,
    opts: ClosureOptions,
) -> Result<ClosureTrace, ClosureError> {
    check_capacity(amb, s)?;
    let st = amb.structure();
    let max_stages = opts.max_stages.unwrap_or(st.point_count());
    let mut rng = opts.shuffle_seed.map(ChaCha8Rng::seed_from_u64);

    let mut cur = s.clone();
    let mut fresh = s.clone();
    // members of `cur` on each long line, kept in insertion order
    let mut on_line: HashMap<u32, Vec<u32>> = HashMap::new();
    for p in s.iter() {
        for &l in st.lines_through(p) {
            on_line.entry(l).or_default().push(p);
        }
    }
    let mut trace = ClosureTrace {
        method: amb.method(),
        initial: s.clone(),
        stages: Vec::new(),
        final_set: s.clone(),
        fixpoint: false,
    };

    loop {
        let mut touched: Vec<u32> = Vec::new();
        {
            let mut seen = std::collections::HashSet::new();
            for p in fresh.iter() {
                for &l in st.lines_through(p) {
                    let m = on_line.get(&l).map_or(0, Vec::len);
                    // a saturated line cannot gain points
                    if m >= 3 && m < st.line(l).len() && seen.insert(l) {
                        touched.push(l);
                    }
                }
            }
        }
        touched.sort_unstable();
        if let Some(r) = rng.as_mut() {
            touched.shuffle(r);
        }

        let mut added: Vec<Added> = Vec::new();
        let mut new_set = st.empty_set();
        for l in touched {
            let mut m = on_line[&l].clone();
            if let Some(r) = rng.as_mut() {
                m.shuffle(r);
            } else {
                m.sort_unstable();
            }
            let len = m.len();
            for i in 0..len {
                let fi = fresh.contains(m[i]);
                for j in i + 1..len {
                    let fij = fi || fresh.contains(m[j]);
                    for k in j + 1..len {
                        if !(fij || fresh.contains(m[k])) {
                            continue;
                        }
                        let (a, b, c) = (m[i], m[j], m[k]);
                        for (e1, mid, e2) in [(a, b, c), (b, a, c), (a, c, b)] {
                            if let Some(x) = amb.conjugate(e1, e2, mid) {
                                if !cur.contains(x) && new_set.insert(x) {
                                    added.push(Added { point: x, a: e1, b: mid, c: e2 });
                                }
                            }
                        }
                    }
                }
            }
        }

        if added.is_empty() {
            trace.fixpoint = true;
            break;
        }
        if trace.stages.len() == max_stages {
            trace.final_set = cur;
            return Err(ClosureError::StageLimitExceeded(Box::new(trace)));
        }
        added.sort_unstable_by_key(|a| a.point);
        for a in &added {
            cur.insert(a.point);
            for &l in st.lines_through(a.point) {
                on_line.entry(l).or_default().push(a.point);
            }
        }
        trace.stages.push(Stage {
            stage: trace.stages.len() + 1,
            added,
        });
        fresh = new_set;
    }
    trace.final_set = cur;
    Ok(trace)
}
