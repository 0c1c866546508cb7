use super::trivector::slot;
use super::Trivector;
use crate::error::{Error, Result};
use crate::linalg::{complete_basis6, to_dmat, unitarity_defect};
use crate::{Mat6, Vec6, C64};

/// Coefficients below this modulus are reported as exactly zero.
pub const ZERO_COEFF: f64 = 1e-10;

/// An ordered orthonormal basis of ℂ⁶ with display labels.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalBasis {
    columns: Mat6,
    labels: [String; 6],
}

impl OrbitalBasis {
    /// Accepts columns that are orthonormal to 1e-9 and cleans them up with one
    /// Gram–Schmidt pass, so the stored Gram matrix is the identity to 1e-12.
    pub fn new(columns: Mat6, labels: [String; 6]) -> Result<Self> {
        let defect = unitarity_defect(&to_dmat(&columns));
        if defect > 1e-9 {
            return Err(Error::NotUnitary(defect));
        }
        let cols: Vec<Vec6> = (0..6).map(|i| columns.column(i).into()).collect();
        Ok(OrbitalBasis { columns: complete_basis6(&cols), labels })
    }

    pub fn with_labels(columns: Mat6, labels: [&str; 6]) -> Result<Self> {
        OrbitalBasis::new(columns, labels.map(String::from))
    }

    pub fn standard() -> Self {
        OrbitalBasis { columns: Mat6::identity(), labels: ["e1", "e2", "e3", "e4", "e5", "e6"].map(String::from) }
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.columns
    }

    pub fn column(&self, i: usize) -> Vec6 {
        self.columns.column(i).into()
    }

    pub fn labels(&self) -> &[String; 6] {
        &self.labels
    }

    pub fn relabel(mut self, labels: [&str; 6]) -> Self {
        self.labels = labels.map(String::from);
        self
    }

    /// CI coefficients of `t` in this basis.
    pub fn coefficients(&self, t: &Trivector) -> Trivector {
        t.coefficients_in(&self.columns)
    }
}

/// Which diagram an expansion follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    BD8,
    Lone5,
    CIS4,
    CID4,
    Slater5,
    CIS5,
    General,
}

/// One row of a CI expansion: a configuration of basis indices (sorted, 0-based)
/// with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub config: [usize; 3],
    pub coeff: C64,
}

/// A CI expansion on an orbital basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CIExpansion {
    pub basis: OrbitalBasis,
    pub terms: Vec<Term>,
    pub shape: Shape,
}

impl CIExpansion {
    /// Reads the coefficients of `t` on the listed rows. Rows are `(label, config)`
    /// with `config` in any order; the stored configuration is sorted and the
    /// coefficient refers to the sorted wedge.
    pub fn project(t: &Trivector, basis: OrbitalBasis, rows: &[(&str, [usize; 3])], shape: Shape) -> Self {
        let c = basis.coefficients(t);
        let terms = rows
            .iter()
            .map(|(label, cfg)| {
                let mut s = *cfg;
                s.sort_unstable();
                let mut v = c.amps()[slot(s[0], s[1], s[2])];
                if v.norm() < ZERO_COEFF {
                    v = C64::new(0.0, 0.0);
                }
                Term { label: label.to_string(), config: s, coeff: v }
            })
            .collect();
        CIExpansion { basis, terms, shape }
    }

    pub fn reconstruct(&self) -> Trivector {
        let mut c = Trivector::zero();
        for t in &self.terms {
            c.amps_mut()[slot(t.config[0], t.config[1], t.config[2])] += t.coeff;
        }
        c.transform(self.basis.matrix())
    }

    /// `‖t − reconstruct()‖`.
    pub fn residual(&self, t: &Trivector) -> f64 {
        (*t - self.reconstruct()).norm()
    }

    pub fn nonzero_terms(&self) -> usize {
        self.terms.iter().filter(|t| t.coeff.norm() >= ZERO_COEFF).count()
    }

    pub fn coefficient(&self, label: &str) -> Option<C64> {
        self.terms.iter().find(|t| t.label == label).map(|t| t.coeff)
    }
}
