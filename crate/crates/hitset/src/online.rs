//! The online hitting-set algorithm for axis-aligned rectangles.
//!
//! State is a growing hitting set H and a growing set of active tree
//! nodes. Active nodes are upward-closed and (except the root) activated
//! in sibling pairs; the extremal points of every active node are in H.
//!
//! Each arriving rectangle S is processed in three steps: (1) for each
//! corner of S, activate the highest inactive node whose cell contains the
//! corner, together with its sibling; (2) for every node whose cell S
//! crosses, activate its children (if it is active) or its highest
//! inactive ancestor plus sibling (if it is not); (3) if S is still unhit,
//! add the smallest-index point of S ∩ P.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bbd::{BbdTree, NodeId};
use crate::crossing::crossed_nodes;
use crate::error::{Error, Result};
use crate::geometry::{AxisRect, Point};

/// Audit record of one processed rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundReport {
    pub round: usize,
    pub object: AxisRect,
    pub already_hit: bool,
    pub activated_nodes: Vec<NodeId>,
    pub added_points: Vec<u32>,
    pub fallback_point_used: bool,
}

#[derive(Debug, Clone)]
pub struct HitterState {
    tree: Arc<BbdTree>,
    active: Vec<bool>,
    /// Hitting set in insertion order.
    hitting_set: Vec<u32>,
    in_set: Vec<bool>,
    round: usize,
    log: Vec<RoundReport>,
}

impl HitterState {
    pub fn init(tree: Arc<BbdTree>) -> HitterState {
        let nodes = tree.node_count();
        let n = tree.points().len();
        HitterState {
            tree,
            active: vec![false; nodes],
            hitting_set: Vec::new(),
            in_set: vec![false; n],
            round: 0,
            log: Vec::new(),
        }
    }

    pub fn tree(&self) -> &Arc<BbdTree> {
        &self.tree
    }

    pub fn hitting_set(&self) -> &[u32] {
        &self.hitting_set
    }

    pub fn contains_point(&self, id: u32) -> bool {
        self.in_set[id as usize]
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.active[v]
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn log(&self) -> &[RoundReport] {
        &self.log
    }

    fn is_hit(&self, s: &AxisRect) -> bool {
        self.hitting_set
            .iter()
            .any(|&i| s.contains(self.tree.points()[i as usize]))
    }

    fn activate(&mut self, v: NodeId, activated: &mut Vec<NodeId>, added: &mut Vec<u32>) {
        if self.active[v] {
            return;
        }
        self.active[v] = true;
        activated.push(v);
        for &i in &self.tree.ext(v).point_ids {
            if !self.in_set[i as usize] {
                self.in_set[i as usize] = true;
                self.hitting_set.push(i);
                added.push(i);
            }
        }
    }

    fn activate_with_sibling(
        &mut self,
        v: NodeId,
        activated: &mut Vec<NodeId>,
        added: &mut Vec<u32>,
    ) {
        self.activate(v, activated, added);
        if let Some(w) = self.tree.sibling(v) {
            self.activate(w, activated, added);
        }
    }

    /// First inactive node on the root-to-`v` path, if any.
    fn highest_inactive_ancestor(&self, v: NodeId) -> Option<NodeId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.tree.node(cur).parent {
            path.push(p);
            cur = p;
        }
        path.into_iter().rev().find(|&u| !self.active[u])
    }

    /// Processes one rectangle; afterwards `s` is hit by the hitting set.
    pub fn process(&mut self, s: AxisRect) -> Result<RoundReport> {
        let tree = self.tree.clone();
        let points = tree.points();
        if !points.iter().any(|&p| s.contains(p)) {
            return Err(Error::InfeasibleObject(None));
        }
        self.round += 1;
        let round = self.round;

        if self.is_hit(&s) {
            let report = RoundReport {
                round,
                object: s,
                already_hit: true,
                activated_nodes: Vec::new(),
                added_points: Vec::new(),
                fallback_point_used: false,
            };
            self.log.push(report.clone());
            return Ok(report);
        }

        let mut activated = Vec::new();
        let mut added = Vec::new();

        // Step 1: corner activations, in corner order ll, lr, ul, ur.
        let root_cell = tree.bounding_square();
        for a in s.corners() {
            if root_cell.contains(a) {
                let path = tree.path_to_leaf(a)?;
                if let Some(v) = path.into_iter().find(|&u| !self.active[u]) {
                    self.activate_with_sibling(v, &mut activated, &mut added);
                }
            } else {
                self.activate(tree.root(), &mut activated, &mut added);
            }
        }

        // Step 2: crossed cells, pre-order, reading live flags.
        for u in crossed_nodes(&tree, &s) {
            if self.active[u] {
                if let Some((c0, c1)) = tree.node(u).children {
                    if !self.active[c0] {
                        self.activate(c0, &mut activated, &mut added);
                        self.activate(c1, &mut activated, &mut added);
                    }
                }
            } else if let Some(v) = self.highest_inactive_ancestor(u) {
                self.activate_with_sibling(v, &mut activated, &mut added);
            }
        }

        // Step 3: fallback point.
        let mut fallback = false;
        if !self.is_hit(&s) {
            let i = (0..points.len() as u32)
                .find(|&i| s.contains(points[i as usize]))
                .unwrap();
            debug_assert!(!self.in_set[i as usize]);
            self.in_set[i as usize] = true;
            self.hitting_set.push(i);
            added.push(i);
            fallback = true;
        }
        debug_assert!(self.is_hit(&s));

        let report = RoundReport {
            round,
            object: s,
            already_hit: false,
            activated_nodes: activated,
            added_points: added,
            fallback_point_used: fallback,
        };
        self.log.push(report.clone());
        Ok(report)
    }

    /// For every point id, the number of processed rounds whose object
    /// contained the point while the pre-round hitting set missed the
    /// object.
    pub fn unhit_round_counts(&self) -> Vec<usize> {
        let points = self.tree.points();
        let mut counts = vec![0usize; points.len()];
        for r in &self.log {
            if r.already_hit {
                continue;
            }
            for (i, &p) in points.iter().enumerate() {
                if r.object.contains(p) {
                    counts[i] += 1;
                }
            }
        }
        counts
    }

    /// Largest number of points added in any single round.
    pub fn max_points_per_round(&self) -> usize {
        self.log.iter().map(|r| r.added_points.len()).max().unwrap_or(0)
    }

    /// Checks the structural state invariants; returns the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for v in 0..self.tree.node_count() {
            if !self.active[v] {
                continue;
            }
            if let Some(p) = self.tree.node(v).parent {
                if !self.active[p] {
                    return Err(format!("active node {v} has inactive parent {p}"));
                }
            }
            if let Some(w) = self.tree.sibling(v) {
                if !self.active[w] {
                    return Err(format!("active node {v} has inactive sibling {w}"));
                }
            }
            for &i in &self.tree.ext(v).point_ids {
                if !self.in_set[i as usize] {
                    return Err(format!("extremal point {i} of active node {v} not in H"));
                }
            }
        }
        for r in &self.log {
            if !self.is_hit(&r.object) {
                return Err(format!("round {} object is unhit", r.round));
            }
            if r.already_hit && !(r.activated_nodes.is_empty() && r.added_points.is_empty()) {
                return Err(format!("round {} hit early but mutated state", r.round));
            }
        }
        let depth_bound = self.tree.depth() + 1;
        if let Some((i, &c)) = self
            .unhit_round_counts()
            .iter()
            .enumerate()
            .find(|&(_, &c)| c > depth_bound)
        {
            return Err(format!(
                "point {i} saw {c} unhit rounds, bound is {depth_bound}"
            ));
        }
        Ok(())
    }
}

/// Convenience wrapper: whether any point of `set` (ids into `points`)
/// hits the rectangle.
pub fn hits(set: &[u32], points: &[Point], s: &AxisRect) -> bool {
    set.iter().any(|&i| s.contains(points[i as usize]))
}
