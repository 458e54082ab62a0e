//! Verifiers for heredity ideals, quasi-hereditary chains, standard modules, Δ-filtrations and
//! approximations. Every verifier returns a [`Certificate`].

mod approx;
mod certificate;
mod heredity;
mod standard;
mod trace;

use std::collections::BTreeSet;

use serde::Serialize;

pub use approx::{
    coresolution, right_approximation, universal_extension, Approximation, Coresolution,
    UniversalExtension,
};
pub use certificate::{Certificate, CertificateKind, Check, Evidence, Witness};
pub use heredity::{
    chain_ideals, check_heredity_ideal, check_qh, check_qh_definitional, check_qh_theorem,
};
pub use standard::{check_delta_lemmas, standard_family, StandardEntry, StandardFamily};
pub use trace::{
    is_delta_filtered, restrict_induce_check, tor_criterion, trace_filtration, TraceFiltration,
};

use crate::error::{Error, Result};
use crate::meshcat::PresentedCategory;
use crate::quiver::LabeledFiltration;

/// Ordered disjoint layers `B_j ∖ B_{j−1}` covering every object of a category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    layers: Vec<Vec<usize>>,
    finite_on_window: bool,
}

impl Filtration {
    pub fn new(category: &PresentedCategory, layers: Vec<Vec<usize>>) -> Result<Filtration> {
        let mut seen = BTreeSet::new();
        for (j, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::Invalid(format!("layer {} is empty", j + 1)));
            }
            for &x in layer {
                if x >= category.len() {
                    return Err(Error::UnknownObject(format!("object index {x}")));
                }
                if !seen.insert(x) {
                    return Err(Error::Invalid(format!(
                        "object `{}` appears twice",
                        category.name(x)
                    )));
                }
            }
        }
        if seen.len() != category.len() {
            let missing = (0..category.len()).find(|x| !seen.contains(x)).unwrap_or(0);
            return Err(Error::Invalid(format!(
                "filtration is not exhaustive: `{}` is in no layer",
                category.name(missing)
            )));
        }
        Ok(Filtration {
            layers,
            finite_on_window: false,
        })
    }

    /// Maps a labelled family filtration onto a category built on its vertices.
    pub fn from_labeled(
        category: &PresentedCategory,
        labeled: &LabeledFiltration,
    ) -> Result<Filtration> {
        let layers = labeled
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|(_, v)| {
                        category.find_vertex(*v).ok_or_else(|| {
                            Error::UnknownObject(format!(
                                "({}, {}) is not in the category",
                                v.time, v.node
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(category, layers)
    }

    /// Declares the filtration finite on the window, enabling the finite-filtration criteria.
    pub fn declare_finite(mut self) -> Filtration {
        self.finite_on_window = true;
        self
    }

    pub fn is_finite_on_window(&self) -> bool {
        self.finite_on_window
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Layer `j`, counted from 1.
    pub fn layer(&self, j: usize) -> &[usize] {
        &self.layers[j - 1]
    }

    /// `B_j`, with `B_0 = ∅`.
    pub fn cumulative(&self, j: usize) -> BTreeSet<usize> {
        self.layers[..j].iter().flatten().copied().collect()
    }

    pub fn layer_of(&self, x: usize) -> Option<usize> {
        self.layers
            .iter()
            .position(|l| l.contains(&x))
            .map(|j| j + 1)
    }
}
