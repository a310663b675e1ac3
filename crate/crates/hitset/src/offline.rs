//! Exact minimum hitting set over the delivered objects — the baseline for
//! competitive-ratio measurement.
//!
//! Geometric objects are reduced to point-id sets (deduplicated, with
//! supersets of other sets removed), then solved by branch and bound:
//! branch on the points of the smallest uncovered set, upper-bound by
//! greedy max coverage, lower-bound by a greedy packing of pairwise
//! disjoint uncovered sets, and force points of singleton sets.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{point_in_homothet_of_polygon, AxisRect, Homothet, Point, SimplePolygon};

#[derive(Debug, Clone, PartialEq)]
pub struct HittingInstance {
    pub num_points: usize,
    /// Per object, the sorted set of point ids it contains.
    pub object_point_sets: Vec<Vec<u32>>,
}

/// Reduces raw per-object point sets: rejects empty sets, deduplicates,
/// and removes any set that is a superset of another (hitting the subset
/// hits the superset).
pub fn reduce_sets(sets: Vec<Vec<u32>>, num_points: usize) -> Result<HittingInstance> {
    let mut cleaned: Vec<Vec<u32>> = Vec::new();
    for (idx, mut s) in sets.into_iter().enumerate() {
        if s.is_empty() {
            return Err(Error::InfeasibleObject(Some(idx)));
        }
        s.sort_unstable();
        s.dedup();
        cleaned.push(s);
    }
    cleaned.sort();
    cleaned.dedup();
    // Keep only inclusion-minimal sets.
    let minimal: Vec<Vec<u32>> = cleaned
        .iter()
        .filter(|s| {
            !cleaned
                .iter()
                .any(|t| t != *s && t.len() <= s.len() && t.iter().all(|x| s.binary_search(x).is_ok()))
        })
        .cloned()
        .collect();
    Ok(HittingInstance {
        num_points,
        object_point_sets: minimal,
    })
}

/// Reduction from rectangles via brute-force closed containment.
pub fn reduce_rects(objects: &[AxisRect], points: &[Point]) -> Result<HittingInstance> {
    let sets = objects
        .iter()
        .map(|r| {
            (0..points.len() as u32)
                .filter(|&i| r.contains(points[i as usize]))
                .collect()
        })
        .collect();
    reduce_sets(sets, points.len())
}

/// Reduction from positive homothets of a polygon.
pub fn reduce_homothets(
    poly: &SimplePolygon,
    objects: &[Homothet],
    points: &[Point],
) -> Result<HittingInstance> {
    let sets = objects
        .iter()
        .map(|h| {
            (0..points.len() as u32)
                .filter(|&i| point_in_homothet_of_polygon(points[i as usize], poly, h))
                .collect()
        })
        .collect();
    reduce_sets(sets, points.len())
}

/// Result of the branch-and-bound solver.
#[derive(Debug, Clone, PartialEq)]
pub enum OptOutcome {
    /// Certified minimum (the root was closed with matching bounds).
    Proven(Vec<u32>),
    /// Best hitting set found before the time limit; NOT a certified OPT.
    Unproven(Vec<u32>),
}

impl OptOutcome {
    pub fn set(&self) -> &[u32] {
        match self {
            OptOutcome::Proven(s) | OptOutcome::Unproven(s) => s,
        }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, OptOutcome::Proven(_))
    }
}

struct Solver<'a> {
    sets: &'a [Vec<u32>],
    /// Per point, the object indices it covers.
    covers: Vec<Vec<u32>>,
    best: Vec<u32>,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl<'a> Solver<'a> {
    fn greedy(&self) -> Vec<u32> {
        let mut uncovered: Vec<bool> = vec![true; self.sets.len()];
        let mut remaining = self.sets.len();
        let mut chosen = Vec::new();
        while remaining > 0 {
            let mut best_p = u32::MAX;
            let mut best_cov = 0usize;
            for (p, objs) in self.covers.iter().enumerate() {
                let cov = objs.iter().filter(|&&o| uncovered[o as usize]).count();
                if cov > best_cov {
                    best_cov = cov;
                    best_p = p as u32;
                }
            }
            chosen.push(best_p);
            for &o in &self.covers[best_p as usize] {
                if uncovered[o as usize] {
                    uncovered[o as usize] = false;
                    remaining -= 1;
                }
            }
        }
        chosen
    }

    /// Size of a greedily packed family of pairwise disjoint uncovered
    /// sets (every hitting set needs one point per packed set).
    fn packing_bound(&self, uncovered: &[u32]) -> usize {
        let mut order: Vec<u32> = uncovered.to_vec();
        order.sort_by_key(|&o| (self.sets[o as usize].len(), o));
        let mut used = vec![false; self.covers.len()];
        let mut packed = 0;
        for &o in &order {
            let s = &self.sets[o as usize];
            if s.iter().all(|&p| !used[p as usize]) {
                for &p in s {
                    used[p as usize] = true;
                }
                packed += 1;
            }
        }
        packed
    }

    fn search(&mut self, uncovered: Vec<u32>, chosen: &mut Vec<u32>) {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.timed_out = true;
                return;
            }
        }
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + self.packing_bound(&uncovered) >= self.best.len() {
            return;
        }
        // Force points of singleton sets.
        if let Some(&o) = uncovered
            .iter()
            .find(|&&o| self.sets[o as usize].len() == 1)
        {
            let p = self.sets[o as usize][0];
            let next = self.cover(&uncovered, p);
            chosen.push(p);
            self.search(next, chosen);
            chosen.pop();
            return;
        }
        // Branch on the smallest uncovered set.
        let o = *uncovered
            .iter()
            .min_by_key(|&&o| (self.sets[o as usize].len(), o))
            .unwrap();
        for &p in &self.sets[o as usize].clone() {
            let next = self.cover(&uncovered, p);
            chosen.push(p);
            self.search(next, chosen);
            chosen.pop();
            if self.timed_out {
                return;
            }
        }
    }

    fn cover(&self, uncovered: &[u32], p: u32) -> Vec<u32> {
        uncovered
            .iter()
            .copied()
            .filter(|&o| self.sets[o as usize].binary_search(&p).is_err())
            .collect()
    }
}

/// Branch-and-bound exact solver; `time_limit = None` always certifies.
pub fn solve_min_hitting_set(
    inst: &HittingInstance,
    time_limit: Option<Duration>,
) -> Result<OptOutcome> {
    if inst.object_point_sets.iter().any(|s| s.is_empty()) {
        return Err(Error::InfeasibleObject(None));
    }
    if inst.object_point_sets.is_empty() {
        return Ok(OptOutcome::Proven(Vec::new()));
    }
    let mut covers: Vec<Vec<u32>> = vec![Vec::new(); inst.num_points];
    for (o, s) in inst.object_point_sets.iter().enumerate() {
        for &p in s {
            covers[p as usize].push(o as u32);
        }
    }
    let mut solver = Solver {
        sets: &inst.object_point_sets,
        covers,
        best: Vec::new(),
        deadline: time_limit.map(|d| Instant::now() + d),
        timed_out: false,
    };
    solver.best = solver.greedy();
    let all: Vec<u32> = (0..inst.object_point_sets.len() as u32).collect();
    let mut chosen = Vec::new();
    solver.search(all, &mut chosen);
    let mut set = solver.best;
    set.sort_unstable();
    if solver.timed_out {
        Ok(OptOutcome::Unproven(set))
    } else {
        Ok(OptOutcome::Proven(set))
    }
}

/// Certified exact minimum hitting set.
pub fn exact_min_hitting_set(inst: &HittingInstance) -> Result<Vec<u32>> {
    match solve_min_hitting_set(inst, None)? {
        OptOutcome::Proven(s) => Ok(s),
        OptOutcome::Unproven(_) => unreachable!("no time limit"),
    }
}

/// ALG size over OPT size; errors when OPT is zero.
pub fn competitive_ratio(alg_size: usize, opt_size: usize) -> Result<f64> {
    if opt_size == 0 {
        return Err(Error::ZeroOpt);
    }
    Ok(alg_size as f64 / opt_size as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(sets: &[&[u32]], n: usize) -> HittingInstance {
        HittingInstance {
            num_points: n,
            object_point_sets: sets.iter().map(|s| s.to_vec()).collect(),
        }
    }

    fn exhaustive_min(i: &HittingInstance) -> usize {
        let n = i.num_points;
        assert!(n <= 20);
        (0..1u32 << n)
            .filter(|mask| {
                i.object_point_sets
                    .iter()
                    .all(|s| s.iter().any(|&p| mask & (1 << p) != 0))
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn single_pair_object_picks_the_smaller_id() {
        let i = inst(&[&[3, 7]], 10);
        assert_eq!(exact_min_hitting_set(&i).unwrap(), vec![3]);
    }

    #[test]
    fn disjoint_objects_need_one_point_each() {
        let i = inst(&[&[0, 1], &[2, 3], &[4, 5]], 6);
        assert_eq!(exact_min_hitting_set(&i).unwrap().len(), 3);
    }

    #[test]
    fn reduce_merges_duplicates_and_dominated_sets() {
        let i = reduce_sets(vec![vec![1, 2], vec![2, 1], vec![1, 2, 3]], 5).unwrap();
        assert_eq!(i.object_point_sets, vec![vec![1, 2]]);
        assert!(matches!(
            reduce_sets(vec![vec![0], vec![]], 2),
            Err(Error::InfeasibleObject(Some(1)))
        ));
    }

    #[test]
    fn reduce_rects_uses_closed_containment() {
        let pts = [Point::new(0.0, 0.0), Point::new(2.0, 2.0), Point::new(5.0, 5.0)];
        let objs = [
            AxisRect::new(0.0, 0.0, 2.0, 2.0).unwrap(),
            AxisRect::new(4.0, 4.0, 6.0, 6.0).unwrap(),
            AxisRect::new(-1.0, -1.0, 7.0, 7.0).unwrap(),
        ];
        let i = reduce_rects(&objs, &pts).unwrap();
        // The all-containing rectangle is dominated by both others.
        assert_eq!(i.object_point_sets, vec![vec![0, 1], vec![2]]);
        assert_eq!(exact_min_hitting_set(&i).unwrap(), vec![0, 2]);
    }

    #[test]
    fn matches_exhaustive_enumeration_on_random_instances() {
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let n = 4 + (next() % 8) as usize;
            let m = 2 + (next() % 10) as usize;
            let sets: Vec<Vec<u32>> = (0..m)
                .map(|_| {
                    let len = 1 + (next() % 4) as usize;
                    let mut s: Vec<u32> = (0..len).map(|_| (next() % n as u64) as u32).collect();
                    s.sort_unstable();
                    s.dedup();
                    s
                })
                .collect();
            let i = reduce_sets(sets, n).unwrap();
            let exact = exact_min_hitting_set(&i).unwrap();
            assert_eq!(exact.len(), exhaustive_min(&i));
            for s in &i.object_point_sets {
                assert!(s.iter().any(|p| exact.contains(p)));
            }
        }
    }

    #[test]
    fn time_limit_yields_an_unproven_result() {
        // A hard-ish random instance with a zero time budget.
        let mut sets = Vec::new();
        for a in 0..12u32 {
            for b in 12..24u32 {
                if (a + b) % 3 != 0 {
                    sets.push(vec![a, b, (a * b) % 24]);
                }
            }
        }
        let i = reduce_sets(sets, 24).unwrap();
        let out = solve_min_hitting_set(&i, Some(Duration::ZERO)).unwrap();
        assert!(!out.is_proven());
        for s in &i.object_point_sets {
            assert!(s.iter().any(|p| out.set().contains(p)));
        }
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(competitive_ratio(10, 5).unwrap(), 2.0);
        assert_eq!(competitive_ratio(7, 7).unwrap(), 1.0);
        assert_eq!(competitive_ratio(0, 1).unwrap(), 0.0);
        assert!(matches!(competitive_ratio(3, 0), Err(Error::ZeroOpt)));
    }
}
