//! Crossing predicate between a rectangle and a cell, and enumeration of
//! crossed tree nodes.
//!
//! A rectangle R crosses a cell C when they intersect but C contains no
//! corner of R and R contains no vertex of C. The cell is treated as
//! `r_out` minus the open interior of `r_in`, and all point tests are
//! closed.

use crate::bbd::{BbdTree, Cell, NodeId};
use crate::geometry::{AxisRect, Point};

/// The 4 corners of `r_out` plus the 4 corners of `r_in` when present.
pub fn cell_vertices(c: &Cell) -> Vec<Point> {
    let mut v: Vec<Point> = c.r_out.corners().to_vec();
    if let Some(ri) = &c.r_in {
        v.extend(ri.corners());
    }
    v
}

/// Whether `r` meets the region `r_out \ int(r_in)` (both closed sets).
pub fn cell_rect_intersects(c: &Cell, r: &AxisRect) -> bool {
    if !c.r_out.intersects(r) {
        return false;
    }
    // Clip r to r_out; the cell misses r only if the clipped rectangle is
    // strictly inside the inner box.
    let g = AxisRect {
        x_lo: r.x_lo.max(c.r_out.x_lo),
        y_lo: r.y_lo.max(c.r_out.y_lo),
        x_hi: r.x_hi.min(c.r_out.x_hi),
        y_hi: r.y_hi.min(c.r_out.y_hi),
    };
    match &c.r_in {
        None => true,
        Some(ri) => {
            !(ri.x_lo < g.x_lo && g.x_hi < ri.x_hi && ri.y_lo < g.y_lo && g.y_hi < ri.y_hi)
        }
    }
}

/// Crossing predicate: the three conditions evaluated with closed
/// containment.
pub fn crosses(r: &AxisRect, c: &Cell) -> bool {
    if !cell_rect_intersects(c, r) {
        return false;
    }
    if r.corners().iter().any(|&p| c.contains_closed(p)) {
        return false;
    }
    !cell_vertices(c).iter().any(|&p| r.contains(p))
}

/// All node ids whose cells `r` crosses, in pre-order. Subtrees whose cell
/// misses `r` are pruned (children cells are subsets of the parent cell).
pub fn crossed_nodes(tree: &BbdTree, r: &AxisRect) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        let node = tree.node(id);
        if !cell_rect_intersects(&node.cell, r) {
            continue;
        }
        if crosses(r, &node.cell) {
            out.push(id);
        }
        if let Some((a, b)) = node.children {
            stack.push(b);
            stack.push(a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbd::BbdTree;

    fn pt(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    fn rect(x_lo: f64, y_lo: f64, x_hi: f64, y_hi: f64) -> AxisRect {
        AxisRect { x_lo, y_lo, x_hi, y_hi }
    }

    #[test]
    fn cell_vertices_counts() {
        assert_eq!(cell_vertices(&Cell::plain(rect(0.0, 0.0, 1.0, 1.0))).len(), 4);
        let c = Cell {
            r_out: rect(0.0, 0.0, 1.0, 1.0),
            r_in: Some(rect(0.25, 0.25, 0.5, 0.5)),
        };
        let v = cell_vertices(&c);
        assert_eq!(v.len(), 8);
        for q in [
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(0.0, 1.0),
            pt(1.0, 1.0),
            pt(0.25, 0.25),
            pt(0.5, 0.25),
            pt(0.25, 0.5),
            pt(0.5, 0.5),
        ] {
            assert!(v.contains(&q));
        }
    }

    #[test]
    fn slab_crosses_a_plain_cell() {
        let c = Cell::plain(rect(0.0, 0.0, 10.0, 10.0));
        assert!(crosses(&rect(-1.0, 3.0, 11.0, 4.0), &c));
        // A corner of the rectangle lies inside the cell.
        assert!(!crosses(&rect(-1.0, 3.0, 2.0, 4.0), &c));
    }

    #[test]
    fn slab_through_the_inner_box_fails_via_corner_test() {
        let c = Cell {
            r_out: rect(0.0, 0.0, 10.0, 10.0),
            r_in: Some(rect(4.0, 4.0, 6.0, 6.0)),
        };
        assert!(!crosses(&rect(3.0, 4.5, 7.0, 5.5), &c));
    }

    #[test]
    fn containment_in_either_direction_is_not_a_crossing() {
        let c = Cell::plain(rect(2.0, 2.0, 4.0, 4.0));
        assert!(!crosses(&rect(0.0, 0.0, 10.0, 10.0), &c));
        assert!(!crosses(&rect(2.5, 2.5, 3.5, 3.5), &c));
    }

    #[test]
    fn cell_intersection_respects_the_open_inner_box() {
        let c = Cell {
            r_out: rect(0.0, 0.0, 10.0, 10.0),
            r_in: Some(rect(4.0, 4.0, 6.0, 6.0)),
        };
        // Strictly inside the inner box: misses the cell.
        assert!(!cell_rect_intersects(&c, &rect(4.5, 4.5, 5.5, 5.5)));
        // Touching the inner boundary: meets the cell.
        assert!(cell_rect_intersects(&c, &rect(4.0, 4.5, 5.5, 5.5)));
    }

    #[test]
    fn crossed_nodes_matches_a_full_scan() {
        let pts: Vec<Point> = (0..30)
            .map(|i| {
                let s = (i as f64 * 0.618033988749895).fract();
                let u = (i as f64 * 0.3819660112501051).fract();
                pt((s * 512.0).round() / 512.0, (u * 512.0).round() / 512.0)
            })
            .collect();
        let t = BbdTree::build(&pts).unwrap();
        let queries = [
            rect(-1.0, 0.4, 2.0, 0.5),
            rect(0.1, -5.0, 0.2, 5.0),
            rect(0.25, 0.25, 0.75, 0.75),
            rect(-10.0, -10.0, 10.0, 10.0),
            rect(50.0, 50.0, 60.0, 60.0),
        ];
        for r in &queries {
            let fast = crossed_nodes(&t, r);
            let slow: Vec<NodeId> = (0..t.node_count())
                .filter(|&id| crosses(r, &t.node(id).cell))
                .collect();
            assert_eq!(fast, slow);
        }
        assert!(crossed_nodes(&t, &rect(50.0, 50.0, 60.0, 60.0)).is_empty());
    }

    #[test]
    fn root_only_tree() {
        let t = BbdTree::build(&[pt(5.0, 5.0)]).unwrap();
        let b = t.bounding_square();
        let slab = rect(b.x_lo - 1.0, 5.0, b.x_hi + 1.0, 5.25);
        assert_eq!(crossed_nodes(&t, &slab), vec![t.root()]);
    }
}
