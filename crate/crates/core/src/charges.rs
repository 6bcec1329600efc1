//! Charge vectors paired by a symmetric bilinear form.

use crate::linalg::QMatrix;
use crate::rational::{QVec, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChargeError {
    #[error("bilinear form must be a symmetric {0}x{0} matrix")]
    BadForm(usize),
    #[error("charge {index} has {got} components, expected {expected}")]
    BadCharge { index: usize, got: usize, expected: usize },
}

/// Charges `c_1..c_n` in `Q^m` and a symmetric form `Tr` on `Q^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeSystem {
    tr: QMatrix,
    charges: Vec<QVec>,
}

impl ChargeSystem {
    pub fn new(tr: QMatrix, charges: Vec<QVec>) -> Result<Self, ChargeError> {
        let m = tr.rows();
        if !tr.is_square() || !tr.is_symmetric() {
            return Err(ChargeError::BadForm(m));
        }
        for (index, c) in charges.iter().enumerate() {
            if c.len() != m {
                return Err(ChargeError::BadCharge { index, got: c.len(), expected: m });
            }
        }
        Ok(ChargeSystem { tr, charges })
    }

    /// `n` unit charges `e_1` with `Tr` the identity on `Q^m`.
    pub fn unit(n: usize, m: usize) -> Self {
        ChargeSystem::new(QMatrix::identity(m), vec![QVec::unit(m, 0); n]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.tr.rows()
    }

    pub fn form(&self) -> &QMatrix {
        &self.tr
    }

    pub fn charges(&self) -> &[QVec] {
        &self.charges
    }

    /// `Tr(c_i, c_j)`.
    pub fn pair(&self, i: usize, j: usize) -> Q {
        self.charges[i].dot(&self.tr.mul_vec(&self.charges[j]))
    }
}
