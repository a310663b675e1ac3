//! Balanced box decomposition tree over a fixed planar point set.
//!
//! Every box in a tree (outer boxes, inner boxes, shrink boxes) belongs to
//! the hierarchical halving grid of the root square: it is reachable from
//! the root by repeatedly splitting the longer side at its midpoint. Grid
//! boxes have aspect ratio 1 or 2 and nested grid boxes are automatically
//! sticky in each other, because the gap between parallel sides is always
//! an integer multiple of the inner box's side length.
//!
//! Point-to-cell assignment uses the half-open convention: a point on a
//! shared boundary belongs to the cell whose interior lies on the +x (then
//! +y) side; the root square is closed on all sides.

use crate::error::{Error, Result};
use crate::extremal::{ext_cell, ExtremalSet};
use crate::geometry::{AxisRect, Point};

pub type NodeId = usize;

/// Split axis of a fair split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// The region `r_out \ int(r_in)` attached to a tree node. `r_in = None`
/// represents an empty inner box (a plain rectangle).
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub r_out: AxisRect,
    pub r_in: Option<AxisRect>,
}

impl Cell {
    pub fn plain(r_out: AxisRect) -> Cell {
        Cell { r_out, r_in: None }
    }

    /// Builds a cell, collapsing the representation when `r_in` is exactly
    /// one halving child of `r_out` (the region is then the other half, a
    /// plain rectangle).
    pub fn normalized(r_out: AxisRect, r_in: Option<AxisRect>) -> Cell {
        if let Some(ri) = r_in {
            let (_, _, lo, hi) = halve(&r_out);
            if ri == lo {
                return Cell::plain(hi);
            }
            if ri == hi {
                return Cell::plain(lo);
            }
            return Cell { r_out, r_in: Some(ri) };
        }
        Cell { r_out, r_in: None }
    }

    /// Closed membership in the region `r_out \ int(r_in)`.
    pub fn contains_closed(&self, p: Point) -> bool {
        self.r_out.contains(p) && !self.r_in.as_ref().is_some_and(|ri| ri.contains_interior(p))
    }
}

/// Halve `b` through the midpoint of its longer side (ties split
/// vertically). Returns the axis, the split coordinate, and the low/high
/// halves.
pub fn halve(b: &AxisRect) -> (Axis, f64, AxisRect, AxisRect) {
    if b.width() >= b.height() {
        let at = 0.5 * (b.x_lo + b.x_hi);
        (
            Axis::X,
            at,
            AxisRect { x_hi: at, ..*b },
            AxisRect { x_lo: at, ..*b },
        )
    } else {
        let at = 0.5 * (b.y_lo + b.y_hi);
        (
            Axis::Y,
            at,
            AxisRect { y_hi: at, ..*b },
            AxisRect { y_lo: at, ..*b },
        )
    }
}

/// Exact stickiness of `inner` in `outer`: every translate of `inner` in
/// the 3x3 grid centered on it lies entirely within `outer` or has
/// interior disjoint from `outer`.
pub fn sticky_in(inner: &AxisRect, outer: &AxisRect) -> bool {
    let (w, h) = (inner.width(), inner.height());
    for dx in [-1.0, 0.0, 1.0] {
        for dy in [-1.0, 0.0, 1.0] {
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let t = AxisRect {
                x_lo: inner.x_lo + dx * w,
                x_hi: inner.x_hi + dx * w,
                y_lo: inner.y_lo + dy * h,
                y_hi: inner.y_hi + dy * h,
            };
            let inside = outer.contains_rect(&t);
            let interior_disjoint = t.x_hi <= outer.x_lo
                || t.x_lo >= outer.x_hi
                || t.y_hi <= outer.y_lo
                || t.y_lo >= outer.y_hi;
            if !inside && !interior_disjoint {
                return false;
            }
        }
    }
    true
}

/// Equivalent per-side distance characterization of stickiness: each gap
/// between parallel sides of `inner` and `outer` is 0 or at least the
/// corresponding side length of `inner`.
pub fn sticky_in_by_distance(inner: &AxisRect, outer: &AxisRect) -> bool {
    let (w, h) = (inner.width(), inner.height());
    let gaps_x = [inner.x_lo - outer.x_lo, outer.x_hi - inner.x_hi];
    let gaps_y = [inner.y_lo - outer.y_lo, outer.y_hi - inner.y_hi];
    gaps_x.iter().all(|&g| g == 0.0 || g >= w) && gaps_y.iter().all(|&g| g == 0.0 || g >= h)
}

fn check_cell_invariants(c: &Cell) -> Result<()> {
    if c.r_out.width() <= 0.0 || c.r_out.height() <= 0.0 {
        return Err(Error::InvalidSplit("empty outer box".into()));
    }
    if c.r_out.aspect_ratio()? > 3.0 {
        return Err(Error::InvalidSplit("outer aspect ratio exceeds 3".into()));
    }
    if let Some(ri) = &c.r_in {
        if !c.r_out.contains_rect_proper(ri) {
            return Err(Error::InvalidSplit("inner box not properly contained".into()));
        }
        if ri.aspect_ratio()? > 3.0 {
            return Err(Error::InvalidSplit("inner aspect ratio exceeds 3".into()));
        }
        if !sticky_in(ri, &c.r_out) {
            return Err(Error::InvalidSplit("inner box not sticky".into()));
        }
    }
    Ok(())
}

/// Fair split of a cell along the midpoint of the longer side of `r_out`
/// (ties split vertically). The split line must not cut the interior of
/// `r_in`.
pub fn fair_split(cell: &Cell) -> Result<(Cell, Cell)> {
    let (axis, at, lo, hi) = halve(&cell.r_out);
    let (c_lo, c_hi) = match &cell.r_in {
        None => (Cell::plain(lo), Cell::plain(hi)),
        Some(ri) => {
            let cuts = match axis {
                Axis::X => ri.x_lo < at && at < ri.x_hi,
                Axis::Y => ri.y_lo < at && at < ri.y_hi,
            };
            if cuts {
                return Err(Error::InvalidSplit("split line cuts the inner box".into()));
            }
            if lo.contains_rect(ri) {
                (Cell::normalized(lo, Some(*ri)), Cell::plain(hi))
            } else if hi.contains_rect(ri) {
                (Cell::plain(lo), Cell::normalized(hi, Some(*ri)))
            } else {
                return Err(Error::InvalidSplit("inner box straddles the split line".into()));
            }
        }
    };
    check_cell_invariants(&c_lo)?;
    check_cell_invariants(&c_hi)?;
    Ok((c_lo, c_hi))
}

/// Shrink with box `r`: decomposes `r_out \ r_in` into `r_out \ r` and
/// `r \ r_in`. Requires `r_in <= r <= r_out` (both proper), stickiness of
/// `r` in `r_out` and of `r_in` in `r`, and aspect ratio of `r` at most 3.
pub fn shrink(cell: &Cell, r: &AxisRect) -> Result<(Cell, Cell)> {
    if !cell.r_out.contains_rect_proper(r) {
        return Err(Error::InvalidSplit("shrink box must be a proper subset of r_out".into()));
    }
    if let Some(ri) = &cell.r_in {
        if !r.contains_rect(ri) || r == ri {
            return Err(Error::InvalidSplit("shrink box must properly contain r_in".into()));
        }
    }
    let outer = Cell::normalized(cell.r_out, Some(*r));
    let inner = Cell::normalized(*r, cell.r_in);
    check_cell_invariants(&outer)?;
    check_cell_invariants(&inner)?;
    Ok((outer, inner))
}

/// How an internal node was decomposed; drives point location.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitKind {
    FairSplit { axis: Axis, at: f64 },
    /// Children are (outside `inner`, inside `inner`).
    Shrink { inner: AxisRect },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub cell: Cell,
    pub parent: Option<NodeId>,
    /// Child order is (low, high) for fair splits and (outer, inner) for
    /// shrinks; node ids are assigned in pre-order.
    pub children: Option<(NodeId, NodeId)>,
    pub split: Option<SplitKind>,
    /// Indices into the tree's point list that lie in this node's cell.
    pub point_ids: Vec<u32>,
    pub depth: usize,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug)]
pub struct BbdTree {
    nodes: Vec<Node>,
    points: Vec<Point>,
    bounding_square: AxisRect,
    depth: usize,
    ext: Vec<ExtremalSet>,
}

impl BbdTree {
    /// Builds the tree over a nonempty, duplicate-free point set.
    pub fn build(points: &[Point]) -> Result<BbdTree> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            (points[a].x, points[a].y)
                .partial_cmp(&(points[b].x, points[b].y))
                .unwrap()
        });
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
            }
        }

        let bounding_square = bounding_square_of(points);
        let mut builder = Builder {
            points,
            root: bounding_square,
            nodes: Vec::new(),
        };
        let all: Vec<u32> = (0..points.len() as u32).collect();
        builder.build_node(Cell::plain(bounding_square), all, 0, None)?;

        let depth = builder.nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        let ext = builder
            .nodes
            .iter()
            .map(|n| ext_cell(&n.cell, points, &n.point_ids))
            .collect::<Result<Vec<_>>>()?;
        Ok(BbdTree {
            nodes: builder.nodes,
            points: points.to_vec(),
            bounding_square,
            depth,
            ext,
        })
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn bounding_square(&self) -> AxisRect {
        self.bounding_square
    }

    /// Cached extremal set of node `id`.
    pub fn ext(&self, id: NodeId) -> &ExtremalSet {
        &self.ext[id]
    }

    pub fn sibling(&self, id: NodeId) -> Option<NodeId> {
        let parent = self.nodes[id].parent?;
        let (a, b) = self.nodes[parent].children.unwrap();
        Some(if a == id { b } else { a })
    }

    /// Half-open membership of `p` in grid box `b`: low sides closed, high
    /// sides open unless flush with the root square (which is closed).
    pub fn ho_box_contains(&self, b: &AxisRect, p: Point) -> bool {
        p.x >= b.x_lo
            && p.y >= b.y_lo
            && (p.x < b.x_hi || b.x_hi == self.bounding_square.x_hi)
            && (p.y < b.y_hi || b.y_hi == self.bounding_square.y_hi)
    }

    /// Half-open membership of `p` in a cell region.
    pub fn ho_cell_contains(&self, cell: &Cell, p: Point) -> bool {
        self.ho_box_contains(&cell.r_out, p)
            && !cell.r_in.as_ref().is_some_and(|ri| self.ho_box_contains(ri, p))
    }

    /// Root-to-leaf path of the unique leaf whose cell contains `p` under
    /// the half-open convention.
    pub fn path_to_leaf(&self, p: Point) -> Result<Vec<NodeId>> {
        if !self.bounding_square.contains(p) {
            return Err(Error::OutsideRootCell);
        }
        let mut path = vec![self.root()];
        let mut cur = self.root();
        while let Some((c0, c1)) = self.nodes[cur].children {
            let go_high = match self.nodes[cur].split.as_ref().unwrap() {
                SplitKind::FairSplit { axis: Axis::X, at } => p.x >= *at,
                SplitKind::FairSplit { axis: Axis::Y, at } => p.y >= *at,
                SplitKind::Shrink { inner } => self.ho_box_contains(inner, p),
            };
            cur = if go_high { c1 } else { c0 };
            path.push(cur);
        }
        Ok(path)
    }

    /// The unique leaf whose cell contains `p` (half-open convention).
    pub fn locate_point(&self, p: Point) -> Result<NodeId> {
        Ok(*self.path_to_leaf(p)?.last().unwrap())
    }

    /// One node per line, pre-order:
    /// `node_id parent_id r_out(x_lo,y_lo,x_hi,y_hi) r_in(...)|none point_count`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, n) in self.nodes.iter().enumerate() {
            let parent = n.parent.map(|p| p as i64).unwrap_or(-1);
            let ro = &n.cell.r_out;
            let rin = match &n.cell.r_in {
                Some(ri) => format!("r_in({},{},{},{})", ri.x_lo, ri.y_lo, ri.x_hi, ri.y_hi),
                None => "none".to_string(),
            };
            out.push_str(&format!(
                "{id} {parent} r_out({},{},{},{}) {rin} {}\n",
                ro.x_lo,
                ro.y_lo,
                ro.x_hi,
                ro.y_hi,
                n.point_ids.len()
            ));
        }
        out
    }
}

/// Smallest power-of-two-sided axis-aligned square centered on the input's
/// bounding box with side at least twice the bounding box extent.
fn bounding_square_of(points: &[Point]) -> AxisRect {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for p in points {
        x_lo = x_lo.min(p.x);
        x_hi = x_hi.max(p.x);
        y_lo = y_lo.min(p.y);
        y_hi = y_hi.max(p.y);
    }
    let extent = (x_hi - x_lo).max(y_hi - y_lo);
    let target = if extent > 0.0 { 2.0 * extent } else { 1.0 };
    let mut side = 1.0;
    while side < target {
        side *= 2.0;
    }
    while side * 0.5 >= target {
        side *= 0.5;
    }
    let cx = 0.5 * (x_lo + x_hi);
    let cy = 0.5 * (y_lo + y_hi);
    AxisRect {
        x_lo: cx - 0.5 * side,
        x_hi: cx + 0.5 * side,
        y_lo: cy - 0.5 * side,
        y_hi: cy + 0.5 * side,
    }
}

struct Builder<'a> {
    points: &'a [Point],
    root: AxisRect,
    nodes: Vec<Node>,
}

const MAX_HALVINGS: usize = 1100;

enum Decision {
    Leaf,
    Split {
        kind: SplitKind,
        lo: (Cell, Vec<u32>),
        hi: (Cell, Vec<u32>),
    },
}

impl<'a> Builder<'a> {
    fn ho_box_contains(&self, b: &AxisRect, p: Point) -> bool {
        p.x >= b.x_lo
            && p.y >= b.y_lo
            && (p.x < b.x_hi || b.x_hi == self.root.x_hi)
            && (p.y < b.y_hi || b.y_hi == self.root.y_hi)
    }

    fn build_node(
        &mut self,
        cell: Cell,
        pts: Vec<u32>,
        depth: usize,
        parent: Option<NodeId>,
    ) -> Result<NodeId> {
        let id = self.nodes.len();
        self.nodes.push(Node {
            cell: cell.clone(),
            parent,
            children: None,
            split: None,
            point_ids: pts.clone(),
            depth,
        });
        match self.decide(&cell, &pts)? {
            Decision::Leaf => {}
            Decision::Split { kind, lo, hi } => {
                let c0 = self.build_node(lo.0, lo.1, depth + 1, Some(id))?;
                let c1 = self.build_node(hi.0, hi.1, depth + 1, Some(id))?;
                self.nodes[id].children = Some((c0, c1));
                self.nodes[id].split = Some(kind);
            }
        }
        Ok(id)
    }

    fn decide(&self, cell: &Cell, pts: &[u32]) -> Result<Decision> {
        if pts.len() <= 1 {
            return Ok(Decision::Leaf);
        }
        match &cell.r_in {
            None => self.decide_plain(&cell.r_out, pts),
            Some(ri) => self.decide_annulus(&cell.r_out, ri, pts),
        }
    }

    /// Plain box: descend the majority halving path until the count drops
    /// to at most 2/3 of the cell's count. A one-step descent is a fair
    /// split; a deeper one is a shrink onto the reached grid box.
    fn decide_plain(&self, r_out: &AxisRect, pts: &[u32]) -> Result<Decision> {
        let n = pts.len();
        let mut b = *r_out;
        let mut cur: Vec<u32> = pts.to_vec();
        for step in 0..MAX_HALVINGS {
            let (axis, at, lo, hi) = halve(&b);
            if !at.is_finite() || at <= lo_coord(&b, axis) || at >= hi_coord(&b, axis) {
                return Err(Error::Construction("cannot halve box further".into()));
            }
            let (lo_pts, hi_pts): (Vec<u32>, Vec<u32>) = cur.iter().partition(|&&i| {
                let p = self.points[i as usize];
                match axis {
                    Axis::X => p.x < at,
                    Axis::Y => p.y < at,
                }
            });
            let (maj_box, maj_pts, min_pts) = if hi_pts.len() > lo_pts.len() {
                (hi, hi_pts, lo_pts)
            } else {
                (lo, lo_pts, hi_pts)
            };
            if 3 * maj_pts.len() <= 2 * n {
                if step == 0 {
                    // Fair split through the midpoint of the longer side.
                    let (p_lo, p_hi) = if maj_box == lo {
                        (maj_pts, min_pts)
                    } else {
                        (min_pts, maj_pts)
                    };
                    return Ok(Decision::Split {
                        kind: SplitKind::FairSplit { axis, at },
                        lo: (Cell::plain(lo), p_lo),
                        hi: (Cell::plain(hi), p_hi),
                    });
                }
                // Centroid shrink onto the reached grid box.
                let outer_pts: Vec<u32> = pts
                    .iter()
                    .copied()
                    .filter(|&i| !self.ho_box_contains(&maj_box, self.points[i as usize]))
                    .collect();
                debug_assert_eq!(outer_pts.len() + maj_pts.len(), n);
                let outer = Cell::normalized(*r_out, Some(maj_box));
                let inner = Cell::plain(maj_box);
                return Ok(Decision::Split {
                    kind: SplitKind::Shrink { inner: maj_box },
                    lo: (outer, outer_pts),
                    hi: (inner, maj_pts),
                });
            }
            b = maj_box;
            cur = maj_pts;
        }
        Err(Error::Construction("halving limit exceeded".into()))
    }

    /// Annulus cell: shrink onto a grid ancestor of `r_in`, preferring a
    /// compression jump past empty outer rings, then a count-balanced
    /// ancestor; fall back to a fair split when a single ring is too heavy
    /// to balance.
    fn decide_annulus(&self, r_out: &AxisRect, r_in: &AxisRect, pts: &[u32]) -> Result<Decision> {
        let n = pts.len();
        // chain[0] = r_out, chain[t] = r_in, each a halving child of the previous.
        let mut chain = vec![*r_out];
        for _ in 0..MAX_HALVINGS {
            let b = *chain.last().unwrap();
            if b == *r_in {
                break;
            }
            let (_, _, lo, hi) = halve(&b);
            if lo.contains_rect(r_in) {
                chain.push(lo);
            } else if hi.contains_rect(r_in) {
                chain.push(hi);
            } else {
                return Err(Error::Construction("inner box is not grid-aligned".into()));
            }
        }
        let t = chain.len() - 1;
        if *chain.last().unwrap() != *r_in || t < 2 {
            return Err(Error::Construction("invalid annulus chain".into()));
        }
        let counts: Vec<usize> = chain
            .iter()
            .map(|g| {
                pts.iter()
                    .filter(|&&i| self.ho_box_contains(g, self.points[i as usize]))
                    .count()
            })
            .collect();
        debug_assert_eq!(counts[0], n);
        debug_assert_eq!(counts[t], 0);

        // Compression: jump past empty outer rings so the next split sees a
        // nonempty top ring.
        let j0 = (0..=t).rev().find(|&j| counts[j] == n).unwrap();
        if j0 >= 1 {
            let r = chain[j0];
            let outer = Cell::normalized(*r_out, Some(r));
            let inner = Cell::normalized(r, Some(*r_in));
            return Ok(Decision::Split {
                kind: SplitKind::Shrink { inner: r },
                lo: (outer, Vec::new()),
                hi: (inner, pts.to_vec()),
            });
        }

        // Balanced shrink among proper grid ancestors of r_in.
        let j_best = (1..t)
            .min_by_key(|&j| (counts[j].max(n - counts[j]), j))
            .unwrap();
        if 3 * counts[j_best].max(n - counts[j_best]) <= 2 * n {
            let r = chain[j_best];
            let (outer_pts, inner_pts): (Vec<u32>, Vec<u32>) = pts
                .iter()
                .partition(|&&i| !self.ho_box_contains(&r, self.points[i as usize]));
            let outer = Cell::normalized(*r_out, Some(r));
            let inner = Cell::normalized(r, Some(*r_in));
            return Ok(Decision::Split {
                kind: SplitKind::Shrink { inner: r },
                lo: (outer, outer_pts),
                hi: (inner, inner_pts),
            });
        }

        // A single ring is too heavy to balance: peel the top ring with a
        // fair split; the ring lands in a plain box handled by the
        // centroid shrink one level down.
        let (axis, at, lo, hi) = halve(r_out);
        let (c_lo, c_hi) = if chain[1] == lo {
            (Cell::normalized(lo, Some(*r_in)), Cell::plain(hi))
        } else {
            (Cell::plain(lo), Cell::normalized(hi, Some(*r_in)))
        };
        let (lo_pts, hi_pts): (Vec<u32>, Vec<u32>) = pts.iter().partition(|&&i| {
            let p = self.points[i as usize];
            match axis {
                Axis::X => p.x < at,
                Axis::Y => p.y < at,
            }
        });
        Ok(Decision::Split {
            kind: SplitKind::FairSplit { axis, at },
            lo: (c_lo, lo_pts),
            hi: (c_hi, hi_pts),
        })
    }
}

/// Frozen depth bound: depth <= DEPTH_SLOPE * log2(n+1) + DEPTH_OFFSET.
/// Measured maxima across the generator sweep stay below 1.8 * log2(n+1).
pub const DEPTH_SLOPE: f64 = 2.0;
pub const DEPTH_OFFSET: f64 = 4.0;
/// Frozen node-count bound: node_count <= NODE_FACTOR * n (measured < 2.4).
pub const NODE_FACTOR: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub pass: bool,
    /// First counterexample, when failing.
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<PropertyCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            match (&c.pass, &c.detail) {
                (true, _) => writeln!(f, "PASS {}", c.name)?,
                (false, Some(d)) => writeln!(f, "FAIL {}: {}", c.name, d)?,
                (false, None) => writeln!(f, "FAIL {}", c.name)?,
            }
        }
        Ok(())
    }
}

/// Checks every structural invariant of the tree independently of the
/// construction code. Partition checks use midpoints of the elementary
/// grid spanned by the involved box coordinates (no area arithmetic);
/// stickiness uses the 3x3 translate characterization. All comparisons are
/// exact.
pub fn validate(tree: &BbdTree) -> ValidationReport {
    let mut checks = Vec::new();
    let fail = |name, detail: String| PropertyCheck {
        name,
        pass: false,
        detail: Some(detail),
    };
    let pass = |name| PropertyCheck {
        name,
        pass: true,
        detail: None,
    };

    // Cell structure: proper containment, child count, split kind recorded.
    let mut c = pass("cell-structure");
    for (id, n) in tree.nodes.iter().enumerate() {
        let ro = &n.cell.r_out;
        let ok_box = ro.x_lo < ro.x_hi && ro.y_lo < ro.y_hi;
        let ok_in = n
            .cell
            .r_in
            .as_ref()
            .is_none_or(|ri| ro.contains_rect_proper(ri) && ri.x_lo < ri.x_hi && ri.y_lo < ri.y_hi);
        let ok_children = match (n.children, &n.split) {
            (None, None) => true,
            (Some((a, b)), Some(_)) => {
                a < tree.nodes.len()
                    && b < tree.nodes.len()
                    && tree.nodes[a].parent == Some(id)
                    && tree.nodes[b].parent == Some(id)
            }
            _ => false,
        };
        if !(ok_box && ok_in && ok_children) {
            c = fail("cell-structure", format!("node {id}"));
            break;
        }
    }
    checks.push(c);

    // Aspect ratios of all boxes are at most 3.
    let mut c = pass("aspect-ratio");
    for (id, n) in tree.nodes.iter().enumerate() {
        let bad = |b: &AxisRect| {
            let (w, h) = (b.width(), b.height());
            w <= 0.0 || h <= 0.0 || w > 3.0 * h || h > 3.0 * w
        };
        if bad(&n.cell.r_out) || n.cell.r_in.as_ref().is_some_and(bad) {
            c = fail("aspect-ratio", format!("node {id}"));
            break;
        }
    }
    checks.push(c);

    // Stickiness of every inner box via the 3x3 translate test.
    let mut c = pass("stickiness");
    for (id, n) in tree.nodes.iter().enumerate() {
        if let Some(ri) = &n.cell.r_in {
            if !sticky_in(ri, &n.cell.r_out) {
                c = fail("stickiness", format!("node {id}"));
                break;
            }
        }
    }
    checks.push(c);

    // Laminar partition: for every internal node, midpoints of the
    // elementary grid spanned by the parent's and children's box
    // coordinates lie in the parent region iff they lie in exactly one
    // child region.
    let mut c = pass("laminar-partition");
    'outer: for (id, n) in tree.nodes.iter().enumerate() {
        let Some((a, b)) = n.children else { continue };
        let cells = [&n.cell, &tree.nodes[a].cell, &tree.nodes[b].cell];
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for cell in cells {
            for bx in std::iter::once(&cell.r_out).chain(cell.r_in.iter()) {
                xs.extend([bx.x_lo, bx.x_hi]);
                ys.extend([bx.y_lo, bx.y_hi]);
            }
        }
        xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        xs.dedup();
        ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
        ys.dedup();
        let in_region = |cell: &Cell, q: Point| {
            cell.r_out.contains(q) && !cell.r_in.as_ref().is_some_and(|ri| ri.contains(q))
        };
        for wx in xs.windows(2) {
            for wy in ys.windows(2) {
                let q = Point {
                    x: 0.5 * (wx[0] + wx[1]),
                    y: 0.5 * (wy[0] + wy[1]),
                };
                let in_parent = in_region(cells[0], q);
                let in_children =
                    in_region(cells[1], q) as u32 + in_region(cells[2], q) as u32;
                if (in_parent && in_children != 1) || (!in_parent && in_children != 0) {
                    c = fail(
                        "laminar-partition",
                        format!("node {id} at ({}, {})", q.x, q.y),
                    );
                    break 'outer;
                }
            }
        }
    }
    checks.push(c);

    // Point assignment: each node's ids are the disjoint union of its
    // children's; every leaf holds at most one point lying in its cell;
    // leaf counts sum to n.
    let mut c = pass("point-assignment");
    let mut leaf_total = 0usize;
    for (id, n) in tree.nodes.iter().enumerate() {
        let ok = match n.children {
            Some((a, b)) => {
                let mut merged: Vec<u32> = tree.nodes[a]
                    .point_ids
                    .iter()
                    .chain(&tree.nodes[b].point_ids)
                    .copied()
                    .collect();
                merged.sort_unstable();
                let mut own = n.point_ids.clone();
                own.sort_unstable();
                merged.windows(2).all(|w| w[0] != w[1]) && merged == own
            }
            None => {
                leaf_total += n.point_ids.len();
                n.point_ids.len() <= 1
                    && n.point_ids.iter().all(|&i| {
                        tree.ho_cell_contains(&n.cell, tree.points[i as usize])
                    })
            }
        };
        if !ok {
            c = fail("point-assignment", format!("node {id}"));
            break;
        }
    }
    if c.pass && leaf_total != tree.points.len() {
        c = fail(
            "point-assignment",
            format!("leaf counts sum to {leaf_total}, expected {}", tree.points.len()),
        );
    }
    checks.push(c);

    // Depth and node-count bounds with the frozen constants.
    let n = tree.points.len() as f64;
    let depth = tree.nodes.iter().map(|v| v.depth).max().unwrap_or(0);
    let depth_bound = DEPTH_SLOPE * (n + 1.0).log2() + DEPTH_OFFSET;
    checks.push(if (depth as f64) <= depth_bound && depth == tree.depth {
        pass("depth-bound")
    } else {
        fail("depth-bound", format!("depth {depth} > {depth_bound:.2}"))
    });
    let node_bound = NODE_FACTOR * n;
    checks.push(if (tree.nodes.len() as f64) <= node_bound {
        pass("node-count-bound")
    } else {
        fail(
            "node-count-bound",
            format!("{} nodes > {node_bound:.0}", tree.nodes.len()),
        )
    });

    ValidationReport { checks }
}

fn lo_coord(b: &AxisRect, axis: Axis) -> f64 {
    match axis {
        Axis::X => b.x_lo,
        Axis::Y => b.y_lo,
    }
}

fn hi_coord(b: &AxisRect, axis: Axis) -> f64 {
    match axis {
        Axis::X => b.x_hi,
        Axis::Y => b.y_hi,
    }
}
