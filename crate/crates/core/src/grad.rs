//! Sparse gradient records.

use std::collections::BTreeMap;

/// Dense gradient of a [`Projection`](crate::reg::Projection).
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionGrad {
    /// Row-major, same layout as the projection weight.
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Partial derivatives for the parameters a loss term touched. Keys are
/// ordered so that accumulation and application are deterministic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Gradients {
    pub entity: BTreeMap<usize, Vec<f64>>,
    pub relation: BTreeMap<usize, Vec<f64>>,
    pub bias: BTreeMap<usize, f64>,
    pub projection: Option<ProjectionGrad>,
}

fn axpy(dst: &mut [f64], scale: f64, src: &[f64]) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d += scale * s;
    }
}

fn add_into(map: &mut BTreeMap<usize, Vec<f64>>, index: usize, scale: f64, g: &[f64]) {
    match map.get_mut(&index) {
        Some(acc) => axpy(acc, scale, g),
        None => {
            map.insert(index, g.iter().map(|x| scale * x).collect());
        }
    }
}

impl Gradients {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entity.is_empty()
            && self.relation.is_empty()
            && self.bias.is_empty()
            && self.projection.is_none()
    }

    pub fn add_entity(&mut self, index: usize, scale: f64, g: &[f64]) {
        add_into(&mut self.entity, index, scale, g);
    }

    pub fn add_relation(&mut self, index: usize, scale: f64, g: &[f64]) {
        add_into(&mut self.relation, index, scale, g);
    }

    pub fn add_bias(&mut self, index: usize, g: f64) {
        *self.bias.entry(index).or_insert(0.0) += g;
    }

    pub fn add_projection(&mut self, scale: f64, weight: &[f64], bias: &[f64]) {
        match &mut self.projection {
            Some(p) => {
                axpy(&mut p.weight, scale, weight);
                axpy(&mut p.bias, scale, bias);
            }
            None => {
                self.projection = Some(ProjectionGrad {
                    weight: weight.iter().map(|x| scale * x).collect(),
                    bias: bias.iter().map(|x| scale * x).collect(),
                })
            }
        }
    }

    /// `self += scale * other`.
    pub fn merge(&mut self, other: &Gradients, scale: f64) {
        for (&i, g) in &other.entity {
            self.add_entity(i, scale, g);
        }
        for (&i, g) in &other.relation {
            self.add_relation(i, scale, g);
        }
        for (&i, &g) in &other.bias {
            self.add_bias(i, scale * g);
        }
        if let Some(p) = &other.projection {
            self.add_projection(scale, &p.weight, &p.bias);
        }
    }

    pub fn scaled(mut self, scale: f64) -> Self {
        for g in self.entity.values_mut().chain(self.relation.values_mut()) {
            g.iter_mut().for_each(|x| *x *= scale);
        }
        self.bias.values_mut().for_each(|x| *x *= scale);
        if let Some(p) = &mut self.projection {
            p.weight
                .iter_mut()
                .chain(p.bias.iter_mut())
                .for_each(|x| *x *= scale);
        }
        self
    }
}
