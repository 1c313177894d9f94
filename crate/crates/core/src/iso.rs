//! Isomorphism search between small incidence structures.
//!
//! Points are refined by their line-size signature, then matched by
//! backtracking in a fixed order. Each new assignment is checked against all
//! previously mapped points through a partial line map, so a complete
//! assignment is always a long-line-preserving bijection in both directions.

use crate::incidence::{IncidenceStructure, StructureError};

/// Default bound on the number of points accepted by [`iso_find`].
pub const DEFAULT_MAX_ISO_POINTS: usize = 200;

const UNSET: u32 = u32::MAX;

fn signature(s: &IncidenceStructure, p: u32) -> Vec<usize> {
    let mut sig: Vec<usize> = s.lines_through(p).iter().map(|&l| s.line(l).len()).collect();
    sig.sort_unstable();
    sig
}

fn line_size_profile(s: &IncidenceStructure) -> Vec<usize> {
    let mut v: Vec<usize> = s.lines().iter().map(Vec::len).collect();
    v.sort_unstable();
    v
}

struct Search<'a> {
    a: &'a IncidenceStructure,
    b: &'a IncidenceStructure,
    order: Vec<u32>,
    candidates: Vec<Vec<u32>>,
    fwd: Vec<u32>,
    used: Vec<bool>,
    line_fwd: Vec<u32>,
    line_bwd: Vec<u32>,
    /// Undo log of line-map assignments.
    trail: Vec<u32>,
}

impl Search<'_> {
    fn try_assign(&mut self, u: u32, v: u32, mapped: &[u32]) -> bool {
        let mark = self.trail.len();
        for &w in mapped {
            let fw = self.fwd[w as usize];
            let la = self.a.line_of(u, w);
            let lb = self.b.line_of(v, fw);
            let ok = match (la, lb) {
                (None, None) => true,
                (Some(la), Some(lb)) => {
                    let (cur_f, cur_b) = (self.line_fwd[la as usize], self.line_bwd[lb as usize]);
                    if cur_f == UNSET && cur_b == UNSET {
                        if self.a.line(la).len() != self.b.line(lb).len() {
                            false
                        } else {
                            self.line_fwd[la as usize] = lb;
                            self.line_bwd[lb as usize] = la;
                            self.trail.push(la);
                            true
                        }
                    } else {
                        cur_f == lb && cur_b == la
                    }
                }
                _ => false,
            };
            if !ok {
                self.undo(mark);
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let la = self.trail.pop().unwrap();
            let lb = self.line_fwd[la as usize];
            self.line_fwd[la as usize] = UNSET;
            self.line_bwd[lb as usize] = UNSET;
        }
    }

    fn run(&mut self, depth: usize, mapped: &mut Vec<u32>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        if self.fwd[u as usize] != UNSET {
            // pinned
            return self.run(depth + 1, mapped);
        }
        let cands = self.candidates[u as usize].clone();
        for v in cands {
            if self.used[v as usize] {
                continue;
            }
            let mark = self.trail.len();
            if !self.try_assign(u, v, mapped) {
                continue;
            }
            self.fwd[u as usize] = v;
            self.used[v as usize] = true;
            mapped.push(u);
            if self.run(depth + 1, mapped) {
                return true;
            }
            mapped.pop();
            self.used[v as usize] = false;
            self.fwd[u as usize] = UNSET;
            self.undo(mark);
        }
        false
    }
}

/// Finds a bijection `f` from the points of `a` to those of `b` mapping long
/// lines onto long lines, honouring the given `pins` (pairs `(a_point,
/// b_point)` that must be kept). Returns `f` as a vector indexed by `a`'s
/// points.
pub fn iso_find_pinned(
    a: &IncidenceStructure,
    b: &IncidenceStructure,
    pins: &[(u32, u32)],
    max_points: usize,
) -> Result<Option<Vec<u32>>, StructureError> {
    for s in [a, b] {
        if s.point_count() > max_points {
            return Err(StructureError::TooLarge {
                size: s.point_count(),
                bound: max_points,
            });
        }
    }
    let n = a.point_count();
    if n != b.point_count()
        || a.line_count() != b.line_count()
        || line_size_profile(a) != line_size_profile(b)
    {
        return Ok(None);
    }
    let sig_a: Vec<Vec<usize>> = (0..n as u32).map(|p| signature(a, p)).collect();
    let sig_b: Vec<Vec<usize>> = (0..n as u32).map(|p| signature(b, p)).collect();
    let candidates: Vec<Vec<u32>> = (0..n)
        .map(|u| (0..n as u32).filter(|&v| sig_b[v as usize] == sig_a[u]).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }

    // Order: pinned points first, then grow along lines from the most
    // constrained point so each new point meets already-mapped lines.
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for &(u, _) in pins {
        if !placed[u as usize] {
            placed[u as usize] = true;
            order.push(u);
        }
    }
    while order.len() < n {
        let next = (0..n as u32)
            .filter(|&u| !placed[u as usize])
            .max_by_key(|&u| {
                let linked = order.iter().filter(|&&w| a.line_of(u, w).is_some()).count();
                (linked, sig_a[u as usize].len(), std::cmp::Reverse(u))
            })
            .unwrap();
        placed[next as usize] = true;
        order.push(next);
    }

    let mut search = Search {
        a,
        b,
        order,
        candidates,
        fwd: vec![UNSET; n],
        used: vec![false; n],
        line_fwd: vec![UNSET; a.line_count()],
        line_bwd: vec![UNSET; b.line_count()],
        trail: Vec::new(),
    };
    let mut mapped = Vec::with_capacity(n);
    for &(u, v) in pins {
        if u as usize >= n || v as usize >= n {
            return Ok(None);
        }
        if search.fwd[u as usize] != UNSET {
            if search.fwd[u as usize] != v {
                return Ok(None);
            }
            continue;
        }
        if search.used[v as usize]
            || sig_a[u as usize] != sig_b[v as usize]
            || !search.try_assign(u, v, &mapped)
        {
            return Ok(None);
        }
        search.fwd[u as usize] = v;
        search.used[v as usize] = true;
        mapped.push(u);
    }
    if search.run(0, &mut mapped) {
        Ok(Some(search.fwd))
    } else {
        Ok(None)
    }
}

/// Isomorphism search with the default size bound.
pub fn iso_find(
    a: &IncidenceStructure,
    b: &IncidenceStructure,
) -> Result<Option<Vec<u32>>, StructureError> {
    iso_find_pinned(a, b, &[], DEFAULT_MAX_ISO_POINTS)
}

/// Checks that `map` is a bijection carrying every long line of `a` onto a
/// long line of `b`.
pub fn is_isomorphism(a: &IncidenceStructure, b: &IncidenceStructure, map: &[u32]) -> bool {
    if map.len() != a.point_count() || a.point_count() != b.point_count() {
        return false;
    }
    let mut seen = vec![false; b.point_count()];
    for &v in map {
        if v as usize >= seen.len() || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    if a.line_count() != b.line_count() {
        return false;
    }
    a.lines().iter().all(|line| {
        let mut img: Vec<u32> = line.iter().map(|&p| map[p as usize]).collect();
        img.sort_unstable();
        match b.line_of(img[0], img[1]) {
            Some(l) => b.line(l) == img.as_slice(),
            None => false,
        }
    })
}
