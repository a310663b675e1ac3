//! Problem-instance and run-report serialization (JSON).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxisRect, Homothet, Point, SimplePolygon, Vec2};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rects,
    Homothets,
}

/// Generator header recorded for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub kind: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectRecord {
    Rect { x_lo: f64, y_lo: f64, x_hi: f64, y_hi: f64 },
    Homothet { scale: f64, tx: f64, ty: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub format: u32,
    pub mode: Mode,
    pub meta: Meta,
    pub points: Vec<[f64; 2]>,
    pub objects: Vec<ObjectRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<[f64; 2]>>,
}

impl Instance {
    pub fn points(&self) -> Vec<Point> {
        self.points.iter().map(|&[x, y]| Point::new(x, y)).collect()
    }

    pub fn rect_objects(&self) -> Result<Vec<AxisRect>> {
        self.objects
            .iter()
            .map(|o| match *o {
                ObjectRecord::Rect { x_lo, y_lo, x_hi, y_hi } => {
                    AxisRect::new(x_lo, y_lo, x_hi, y_hi)
                }
                ObjectRecord::Homothet { .. } => Err(Error::InvalidPolygon(
                    "homothet record in rects mode".into(),
                )),
            })
            .collect()
    }

    pub fn homothet_objects(&self) -> Result<Vec<Homothet>> {
        self.objects
            .iter()
            .map(|o| match *o {
                ObjectRecord::Homothet { scale, tx, ty } => {
                    Homothet::new(scale, Vec2::new(tx, ty))
                }
                ObjectRecord::Rect { .. } => Err(Error::InvalidPolygon(
                    "rect record in homothets mode".into(),
                )),
            })
            .collect()
    }

    pub fn polygon(&self) -> Result<Option<SimplePolygon>> {
        match &self.polygon {
            None => Ok(None),
            Some(vs) => Ok(Some(SimplePolygon::new(
                vs.iter().map(|&[x, y]| Point::new(x, y)).collect(),
            )?)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization")
    }

    pub fn from_json(s: &str) -> std::result::Result<Instance, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// The OPT entry of a report: a certified size or the best unproven value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OptSize {
    Proven(usize),
    Unproven { unproven: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub alg_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt_size: Option<OptSize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Rects mode: the tree depth. Homothets mode: the maximum sub-tree depth.
    pub tree_depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_tree_depths: Option<Vec<usize>>,
    pub max_points_per_round: usize,
    pub per_point_max_unhit_rounds: usize,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_log_path: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Instance {
        Instance {
            format: FORMAT_VERSION,
            mode: Mode::Rects,
            meta: Meta {
                kind: "uniform-squares".into(),
                seed: 42,
                n: 2,
                m: 1,
                rho: 2.0,
            },
            points: vec![[0.25, 0.5], [0.75, 0.125]],
            objects: vec![ObjectRecord::Rect {
                x_lo: 0.0,
                y_lo: 0.0,
                x_hi: 0.5,
                y_hi: 1.0,
            }],
            polygon: None,
        }
    }

    #[test]
    fn json_round_trip_is_identity() {
        let inst = sample();
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(inst, back);
        assert_eq!(inst.to_json(), back.to_json());
    }

    #[test]
    fn typed_accessors() {
        let inst = sample();
        assert_eq!(inst.points()[1], Point::new(0.75, 0.125));
        assert_eq!(inst.rect_objects().unwrap().len(), 1);
        assert!(inst.homothet_objects().is_err());
        assert!(inst.polygon().unwrap().is_none());
    }

    #[test]
    fn homothet_records_round_trip() {
        let mut inst = sample();
        inst.mode = Mode::Homothets;
        inst.objects = vec![ObjectRecord::Homothet { scale: 0.5, tx: 1.0, ty: -1.0 }];
        inst.polygon = Some(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let back = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.homothet_objects().unwrap()[0].scale, 0.5);
        assert_eq!(back.polygon().unwrap().unwrap().len(), 3);
    }

    #[test]
    fn malformed_json_is_an_error() {
        assert!(Instance::from_json("{\"format\": 1").is_err());
    }
}
