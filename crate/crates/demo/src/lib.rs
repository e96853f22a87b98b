//! Browser demo over a projected 3x3 grid.
//!
//! Points sit near the centres of grid cells. Every edge type looks at
//! the plane through one projection direction, so weighting types near a
//! direction reveals the rows, the columns or the cells. The JS side gets
//! JSON strings and draws them on canvases.

use std::f64::consts::PI;

use polyedge::clustering::Clustering;
use polyedge::community::{cluster_greedy_modularity, modularity, GreedyModularity};
use polyedge::metaclustering::{run_metaclustering, sample_alphas, sample_clustering_space};
use polyedge::metrics::vi_distance;
use polyedge::multigraph::WeightVector;
use polyedge::recovery::{holding_histogram, HoldingEvaluator};
use polyedge::synth::{generate_grid_with_angles, GridFixture, GridSpec};
use polyedge::error::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const PROJECTIONS: usize = 12;

/// Weight on each projection for a viewing angle in degrees.
///
/// Projections within a few tens of degrees of `theta` dominate; `sharpness`
/// controls how quickly the others fade.
pub fn alpha_for(angles: &[f64], theta_deg: f64, sharpness: f64) -> Vec<f64> {
    let theta = theta_deg.to_radians();
    angles.iter().map(|a| (a - theta).cos().abs().powf(sharpness)).collect()
}

pub struct Scene {
    fixture: GridFixture,
}

impl Scene {
    pub fn new(seed: u64) -> Result<Scene> {
        let spec = GridSpec {
            points_per_cell: 20,
            n_projections: PROJECTIONS,
            seed,
            ..GridSpec::default()
        };
        let angles: Vec<f64> = (0..PROJECTIONS).map(|i| i as f64 * PI / PROJECTIONS as f64).collect();
        Ok(Scene {
            fixture: generate_grid_with_angles(&spec, &angles)?,
        })
    }

    fn truth(&self, name: &str) -> &Clustering {
        match name {
            "rows" => &self.fixture.row_factor,
            "cols" => &self.fixture.col_factor,
            _ => &self.fixture.cells,
        }
    }

    fn against_truths(&self, c: &Clustering) -> Result<Value> {
        Ok(json!({
            "rows": vi_distance(c, &self.fixture.row_factor)?,
            "cols": vi_distance(c, &self.fixture.col_factor)?,
            "cells": vi_distance(c, &self.fixture.cells)?,
        }))
    }

    pub fn points(&self) -> Value {
        json!(self.fixture.points.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>())
    }

    pub fn cluster(&self, theta_deg: f64, sharpness: f64) -> Result<Value> {
        let alpha = WeightVector::new(alpha_for(&self.fixture.angles, theta_deg, sharpness))?;
        let g = self.fixture.graph.aggregate_linear(&alpha, true)?;
        let c = cluster_greedy_modularity(&g)?;
        Ok(json!({
            "alpha": alpha.as_slice(),
            "labels": c.labels(),
            "clusters": c.n_clusters(),
            "modularity": modularity(&g, &c)?,
            "vi": self.against_truths(&c)?,
        }))
    }

    /// Samples the clustering space and meta-clusters it.
    pub fn landscape(&self, samples: usize, seed: u64) -> Result<Value> {
        let alphas = sample_alphas(PROJECTIONS, samples, seed)?;
        let ensemble = sample_clustering_space(&self.fixture.graph, &alphas, &GreedyModularity)?;
        let report = run_metaclustering(&ensemble, &GreedyModularity, None)?;
        let order = &report.seriation;
        let matrix: Vec<Vec<f64>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| report.vi_matrix[i][j]).collect())
            .collect();
        // excluded entries have no meta label
        let part = &report.meta_partition;
        let meta: Vec<Option<usize>> = order
            .iter()
            .map(|&i| part.nodes().index_of(&i.to_string()).map(|v| part.label_of(v)))
            .collect();
        let reps = report
            .representatives
            .iter()
            .zip(&report.representative_sources)
            .zip(&report.ordering_scores)
            .map(|((c, &source), &score)| {
                Ok(json!({
                    "meta": source,
                    "clusters": c.n_clusters(),
                    "score": score,
                    "labels": c.labels(),
                    "vi": self.against_truths(c)?,
                }))
            })
            .collect::<Result<Vec<Value>>>()?;
        Ok(json!({
            "matrix": matrix,
            "meta": meta,
            "representatives": reps,
            "ln_n": (self.fixture.points.len() as f64).ln(),
        }))
    }

    pub fn holding(&self, theta_deg: f64, sharpness: f64, truth: &str, steepness: f64) -> Result<Value> {
        let eval = HoldingEvaluator::new(&self.fixture.graph, self.truth(truth))?;
        let alpha = alpha_for(&self.fixture.angles, theta_deg, sharpness);
        let report = eval.report(&alpha, steepness);
        Ok(json!({
            "bins": holding_histogram(&report.per_node),
            "positive_fraction": report.positive_fraction,
            "mean": report.per_node.iter().sum::<f64>() / report.per_node.len() as f64,
            "objective": report.objective_value,
        }))
    }
}

fn js<T: Into<Value>>(r: Result<T>) -> std::result::Result<String, JsError> {
    r.map(|v| v.into().to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub struct Demo {
    scene: Scene,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32) -> std::result::Result<Demo, JsError> {
        Scene::new(seed as u64)
            .map(|scene| Demo { scene })
            .map_err(|e| JsError::new(&e.to_string()))
    }

    pub fn points(&self) -> String {
        self.scene.points().to_string()
    }

    /// Clustering of the aggregate seen from `theta` degrees.
    pub fn cluster(&self, theta: f64, sharpness: f64) -> std::result::Result<String, JsError> {
        js(self.scene.cluster(theta, sharpness))
    }

    /// Seriated VI matrix and ordered representatives of a sampled ensemble.
    pub fn landscape(&self, samples: u32, seed: u32) -> std::result::Result<String, JsError> {
        js(self.scene.landscape(samples as usize, seed as u64))
    }

    /// Holding-power histogram of `truth` ("rows", "cols" or "cells").
    pub fn holding(&self, theta: f64, sharpness: f64, truth: &str, steepness: f64) -> std::result::Result<String, JsError> {
        js(self.scene.holding(theta, sharpness, truth, steepness))
    }
}
