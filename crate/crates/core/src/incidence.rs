//! Rank-3 simple matroids presented by points and long lines.
//!
//! Only lines with at least three points are stored. Any pair of points not
//! on a common stored line spans an implicit two-point line.

use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::pointset::PointSet;

const NO_LINE: u32 = u32::MAX;

/// Point counts up to this bound get a dense pair-to-line table.
const DENSE_PAIR_LIMIT: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("line {line} refers to point {point}, but the structure has {n} points")]
    IndexOutOfRange { line: usize, point: u32, n: usize },
    #[error("line {line} has {size} distinct points; long lines need at least 3")]
    ShortLine { line: usize, size: usize },
    #[error("points {a} and {b} lie on two long lines ({first} and {second})")]
    PairOnTwoLines {
        a: u32,
        b: u32,
        first: usize,
        second: usize,
    },
    #[error("structure has {size} points, above the bound {bound}")]
    TooLarge { size: usize, bound: usize },
}

/// A simple matroid of rank at most 3 given by its long lines.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    n: usize,
    lines: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    pair_line: Option<Vec<u32>>,
    labels: Vec<Option<String>>,
}

impl IncidenceStructure {
    /// Validates and indexes a list of long lines on points `0..n`.
    ///
    /// Lines are deduplicated internally and sorted; a line with fewer than
    /// three distinct points, an out-of-range index, or a pair covered by two
    /// lines is rejected.
    pub fn new(n: usize, lines: Vec<Vec<u32>>) -> Result<IncidenceStructure, StructureError> {
        let mut clean = Vec::with_capacity(lines.len());
        for (li, mut line) in lines.into_iter().enumerate() {
            if let Some(&bad) = line.iter().find(|&&p| p as usize >= n) {
                return Err(StructureError::IndexOutOfRange { line: li, point: bad, n });
            }
            line.sort_unstable();
            line.dedup();
            if line.len() < 3 {
                return Err(StructureError::ShortLine { line: li, size: line.len() });
            }
            clean.push(line);
        }
        let s = IncidenceStructure::from_trusted(n, clean);
        s.check_pairs()?;
        Ok(s)
    }

    /// Indexes lines that are already sorted, deduplicated and pairwise
    /// compatible. Callers guarantee the invariants.
    pub(crate) fn from_trusted(n: usize, lines: Vec<Vec<u32>>) -> IncidenceStructure {
        let mut point_lines = vec![Vec::new(); n];
        for (li, line) in lines.iter().enumerate() {
            for &p in line {
                point_lines[p as usize].push(li as u32);
            }
        }
        let pair_line = if n <= DENSE_PAIR_LIMIT {
            let mut table = vec![NO_LINE; n * n];
            for (li, line) in lines.iter().enumerate() {
                for (i, &a) in line.iter().enumerate() {
                    for &b in &line[i + 1..] {
                        table[a as usize * n + b as usize] = li as u32;
                        table[b as usize * n + a as usize] = li as u32;
                    }
                }
            }
            Some(table)
        } else {
            None
        };
        IncidenceStructure {
            n,
            lines,
            point_lines,
            pair_line,
            labels: vec![None; n],
        }
    }

    fn check_pairs(&self) -> Result<(), StructureError> {
        let mut owner = std::collections::HashMap::new();
        for (li, line) in self.lines.iter().enumerate() {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    if let Some(prev) = owner.insert((a, b), li) {
                        return Err(StructureError::PairOnTwoLines {
                            a,
                            b,
                            first: prev,
                            second: li,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Self {
        self.set_labels(labels);
        self
    }

    pub fn set_labels(&mut self, mut labels: Vec<Option<String>>) {
        labels.resize(self.n, None);
        self.labels = labels;
    }

    pub fn set_label(&mut self, p: u32, label: impl Into<String>) {
        self.labels[p as usize] = Some(label.into());
    }

    pub fn label(&self, p: u32) -> Option<&str> {
        self.labels[p as usize].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Label, or the bare index when unlabeled.
    pub fn name(&self, p: u32) -> String {
        self.label(p).map(str::to_string).unwrap_or_else(|| p.to_string())
    }

    /// Point whose label equals `label`.
    pub fn find_label(&self, label: &str) -> Option<u32> {
        self.labels
            .iter()
            .position(|l| l.as_deref() == Some(label))
            .map(|i| i as u32)
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line(&self, id: u32) -> &[u32] {
        &self.lines[id as usize]
    }

    /// Long lines through `p`, by id, ascending.
    pub fn lines_through(&self, p: u32) -> &[u32] {
        &self.point_lines[p as usize]
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::new(self.n)
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn set_of<I: IntoIterator<Item = u32>>(&self, it: I) -> PointSet {
        PointSet::from_indices(self.n, it)
    }

    /// The long line containing two distinct points, if any.
    #[inline]
    pub fn line_of(&self, a: u32, b: u32) -> Option<u32> {
        if a == b {
            return None;
        }
        if let Some(table) = &self.pair_line {
            let l = table[a as usize * self.n + b as usize];
            return (l != NO_LINE).then_some(l);
        }
        let (la, lb) = (&self.point_lines[a as usize], &self.point_lines[b as usize]);
        let (mut i, mut j) = (0, 0);
        while i < la.len() && j < lb.len() {
            match la[i].cmp(&lb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(la[i]),
            }
        }
        None
    }

    pub fn on_line(&self, p: u32, line: u32) -> bool {
        self.lines[line as usize].binary_search(&p).is_ok()
    }

    /// Whether `{a, b, c}` has rank at most 2.
    pub fn collinear(&self, a: u32, b: u32, c: u32) -> bool {
        if a == b || a == c || b == c {
            return true;
        }
        match self.line_of(a, b) {
            Some(l) => self.on_line(c, l),
            None => false,
        }
    }

    /// The common point of two distinct long lines, if they meet.
    pub fn common_point(&self, l1: u32, l2: u32) -> Option<u32> {
        if l1 == l2 {
            return None;
        }
        let (a, b) = (&self.lines[l1 as usize], &self.lines[l2 as usize]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(a[i]),
            }
        }
        None
    }

    /// Matroid rank of a point set: 0, 1, 2 or 3.
    pub fn rank(&self, s: &PointSet) -> u8 {
        let mut it = s.iter();
        let Some(a) = it.next() else { return 0 };
        let Some(b) = it.next() else { return 1 };
        let Some(line) = self.line_of(a, b) else {
            return if it.next().is_some() { 3 } else { 2 };
        };
        if it.all(|c| self.on_line(c, line)) {
            2
        } else {
            3
        }
    }

    /// Smallest flat containing `s`.
    pub fn flat_closure(&self, s: &PointSet) -> PointSet {
        match self.rank(s) {
            0 | 1 => s.clone(),
            2 => {
                let mut it = s.iter();
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                match self.line_of(a, b) {
                    Some(l) => self.set_of(self.line(l).iter().copied()),
                    None => s.clone(),
                }
            }
            _ => self.full_set(),
        }
    }

    /// Restriction to `s`, with points renumbered in increasing order.
    /// Returns the new structure and, for each new index, the old index.
    pub fn restrict(&self, s: &PointSet) -> (IncidenceStructure, Vec<u32>) {
        let old: Vec<u32> = s.iter().collect();
        let mut new_of = vec![NO_LINE; self.n];
        for (i, &o) in old.iter().enumerate() {
            new_of[o as usize] = i as u32;
        }
        let mut lines = Vec::new();
        for line in &self.lines {
            let kept: Vec<u32> = line
                .iter()
                .filter(|&&p| new_of[p as usize] != NO_LINE)
                .map(|&p| new_of[p as usize])
                .collect();
            if kept.len() >= 3 {
                lines.push(kept);
            }
        }
        let labels = old.iter().map(|&o| self.labels[o as usize].clone()).collect();
        let r = IncidenceStructure::from_trusted(old.len(), lines).with_labels(labels);
        (r, old)
    }

    /// Removes one point (deletion).
    pub fn delete(&self, p: u32) -> (IncidenceStructure, Vec<u32>) {
        let mut s = self.full_set();
        s.remove(p);
        self.restrict(&s)
    }

    /// Checks the projective plane axioms and samples Desargues configurations.
    pub fn plane_check(&self, desargues_samples: usize, seed: u64) -> PlaneReport {
        const MAX_WITNESSES: usize = 8;
        let n = self.n;
        let mut report = PlaneReport {
            is_plane: false,
            order: None,
            points: n,
            lines: self.lines.len(),
            uncovered_pairs: Vec::new(),
            uncovered_pair_count: 0,
            bad_line_pairs: Vec::new(),
            bad_line_pair_count: 0,
            uniform_line_size: None,
            desargues: DesarguesSummary::default(),
        };

        // (a) every pair of points on a stored line
        let covered: usize = self.lines.iter().map(|l| l.len() * (l.len() - 1) / 2).sum();
        let total = n * n.saturating_sub(1) / 2;
        report.uncovered_pair_count = total - covered.min(total);
        if report.uncovered_pair_count > 0 {
            'scan: for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if self.line_of(a, b).is_none() {
                        report.uncovered_pairs.push((a, b));
                        if report.uncovered_pairs.len() >= MAX_WITNESSES {
                            break 'scan;
                        }
                    }
                }
            }
        }

        // (b) every pair of lines meets in exactly one point
        let m = self.lines.len();
        let mut meets = vec![0u32; m];
        for l1 in 0..m {
            meets.iter_mut().for_each(|c| *c = 0);
            for &p in &self.lines[l1] {
                for &l2 in &self.point_lines[p as usize] {
                    meets[l2 as usize] += 1;
                }
            }
            for (l2, &count) in meets.iter().enumerate().skip(l1 + 1) {
                if count != 1 {
                    report.bad_line_pair_count += 1;
                    if report.bad_line_pairs.len() < MAX_WITNESSES {
                        report.bad_line_pairs.push((l1 as u32, l2 as u32, count));
                    }
                }
            }
        }

        // (c) uniform line size k = q + 1 and n = q^2 + q + 1
        if let Some(first) = self.lines.first() {
            let k = first.len();
            if self.lines.iter().all(|l| l.len() == k) {
                report.uniform_line_size = Some(k);
            }
        }
        let counts_ok = match report.uniform_line_size {
            Some(k) => {
                let q = k - 1;
                q >= 2 && n == q * q + q + 1
            }
            None => false,
        };

        report.is_plane =
            report.uncovered_pair_count == 0 && report.bad_line_pair_count == 0 && counts_ok;
        if report.is_plane {
            report.order = report.uniform_line_size.map(|k| (k - 1) as u32);
            report.desargues = self.sample_desargues(desargues_samples, seed);
        }
        report
    }

    /// Samples central perspectivities and checks the axis condition.
    /// Assumes the structure is a projective plane.
    fn sample_desargues(&self, samples: usize, seed: u64) -> DesarguesSummary {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut summary = DesarguesSummary {
            samples: 0,
            passed: 0,
            failures: Vec::new(),
        };
        if self.n == 0 {
            return summary;
        }
        let mut attempts = 0usize;
        while summary.samples < samples && attempts < samples * 50 {
            attempts += 1;
            let o = rng.random_range(0..self.n as u32);
            let through = &self.point_lines[o as usize];
            if through.len() < 3 {
                continue;
            }
            let mut picked: Vec<u32> = Vec::with_capacity(3);
            while picked.len() < 3 {
                let l = *through.choose(&mut rng).unwrap();
                if !picked.contains(&l) {
                    picked.push(l);
                }
            }
            let mut pairs = [(0u32, 0u32); 3];
            let mut ok = true;
            for (slot, &l) in pairs.iter_mut().zip(&picked) {
                let others: Vec<u32> = self.lines[l as usize].iter().copied().filter(|&p| p != o).collect();
                if others.len() < 2 {
                    ok = false;
                    break;
                }
                let a = *others.choose(&mut rng).unwrap();
                let mut b = a;
                while b == a {
                    b = *others.choose(&mut rng).unwrap();
                }
                *slot = (a, b);
            }
            if !ok {
                continue;
            }
            let [(a, a2), (b, b2), (c, c2)] = pairs;
            if self.collinear(a, b, c) || self.collinear(a2, b2, c2) {
                continue;
            }
            let side = |u: u32, v: u32, u2: u32, v2: u32| -> Option<u32> {
                let l1 = self.line_of(u, v)?;
                let l2 = self.line_of(u2, v2)?;
                self.common_point(l1, l2)
            };
            summary.samples += 1;
            let axis = (side(a, b, a2, b2), side(a, c, a2, c2), side(b, c, b2, c2));
            match axis {
                (Some(x), Some(y), Some(z)) if self.collinear(x, y, z) => summary.passed += 1,
                _ => {
                    if summary.failures.len() < 8 {
                        summary.failures.push([o, a, b, c, a2, b2, c2]);
                    }
                }
            }
        }
        summary
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct DesarguesSummary {
    pub samples: usize,
    pub passed: usize,
    /// Failing configurations as `[center, a, b, c, a', b', c']`.
    pub failures: Vec<[u32; 7]>,
}

impl DesarguesSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.samples
    }
}

/// Outcome of [`IncidenceStructure::plane_check`].
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PlaneReport {
    pub is_plane: bool,
    pub order: Option<u32>,
    pub points: usize,
    pub lines: usize,
    /// Sample of point pairs lying on no stored line.
    pub uncovered_pairs: Vec<(u32, u32)>,
    pub uncovered_pair_count: usize,
    /// Sample of line pairs meeting in a number of points other than one.
    pub bad_line_pairs: Vec<(u32, u32, u32)>,
    pub bad_line_pair_count: usize,
    pub uniform_line_size: Option<usize>,
    pub desargues: DesarguesSummary,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::geometry::build_pg;

    fn fano() -> IncidenceStructure {
        IncidenceStructure::new(
            7,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            IncidenceStructure::new(7, vec![vec![0, 1, 9]]),
            Err(StructureError::IndexOutOfRange { point: 9, .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(7, vec![vec![0, 1, 1]]),
            Err(StructureError::ShortLine { size: 2, .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(7, vec![vec![0, 1, 2], vec![0, 1, 3]]),
            Err(StructureError::PairOnTwoLines { a: 0, b: 1, .. })
        ));
    }

    #[test]
    fn rank_examples() {
        let f = Field::prime(3).unwrap();
        let pg = build_pg(&f).unwrap();
        let s = pg.structure();
        let tri = s.set_of([
            pg.index_of_ints([1, 0, 0]).unwrap(),
            pg.index_of_ints([0, 1, 0]).unwrap(),
            pg.index_of_ints([0, 0, 1]).unwrap(),
        ]);
        assert_eq!(s.rank(&tri), 3);
        assert_eq!(s.rank(&s.empty_set()), 0);
        assert_eq!(s.rank(&s.set_of([4])), 1);
        // two points always have rank 2, also off any long line
        let f7 = fano();
        let pf = IncidenceStructure::from_trusted(7, vec![]);
        assert_eq!(pf.rank(&pf.set_of([0, 1])), 2);
        assert_eq!(pf.rank(&pf.set_of([0, 1, 2])), 3);
        assert_eq!(f7.rank(&f7.set_of([0, 1, 2])), 2);
    }

    #[test]
    fn flat_closure_of_a_pair_is_its_line() {
        let f = Field::prime(3).unwrap();
        let pg = build_pg(&f).unwrap();
        let s = pg.structure();
        let a = pg.index_of_ints([1, 0, 0]).unwrap();
        let b = pg.index_of_ints([0, 1, 0]).unwrap();
        let cl = s.flat_closure(&s.set_of([a, b]));
        assert_eq!(cl.len(), 4);
        for p in cl.iter() {
            assert_eq!(pg.point(p).coords()[2].value(), 0);
        }
        assert!(s.flat_closure(&s.empty_set()).is_empty());
    }

    #[test]
    fn restrict_whole_is_identity() {
        let f7 = fano();
        let (r, map) = f7.restrict(&f7.full_set());
        assert_eq!(map, (0..7).collect::<Vec<_>>());
        assert_eq!(r.lines(), f7.lines());
    }

    #[test]
    fn fano_is_a_plane_of_order_two() {
        let rep = fano().plane_check(50, 1);
        assert!(rep.is_plane);
        assert_eq!(rep.order, Some(2));
        assert!(rep.desargues.all_passed());
    }

    #[test]
    fn pg_planes_pass_check() {
        for f in [
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::new(2, 2, None).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(7).unwrap(),
            Field::new(3, 2, None).unwrap(),
        ] {
            let pg = build_pg(&f).unwrap();
            let rep = pg.structure().plane_check(200, 7);
            assert!(rep.is_plane, "{f:?}");
            assert_eq!(rep.order, Some(f.order()));
            // PG(2,2) has no non-degenerate Desargues configuration
            if f.order() > 2 {
                assert_eq!(rep.desargues.samples, 200, "{f:?}");
            }
            assert!(rep.desargues.all_passed());
        }
    }

    #[test]
    fn sparse_pair_lookup_matches_dense() {
        let f = Field::prime(5).unwrap();
        let pg = build_pg(&f).unwrap();
        let s = pg.structure();
        let sparse = IncidenceStructure {
            pair_line: None,
            ..s.clone()
        };
        for a in 0..31 {
            for b in 0..31 {
                assert_eq!(s.line_of(a, b), sparse.line_of(a, b));
            }
        }
    }
}
