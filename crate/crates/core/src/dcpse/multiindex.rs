use std::fmt;

use crate::error::{Error, Result};

/// Per-coordinate derivative (or monomial) exponents in 1 to 3 dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: [u32; 3],
    dim: u8,
}

impl MultiIndex {
    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.is_empty() || exps.len() > 3 {
            return Err(Error::InvalidInput(format!(
                "multi-index dimension must be 1..=3, got {}",
                exps.len()
            )));
        }
        let mut e = [0; 3];
        e[..exps.len()].copy_from_slice(exps);
        Ok(Self {
            exps: e,
            dim: exps.len() as u8,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps[..self.dim()]
    }

    /// Exponents padded with zeros to three axes.
    pub fn padded(&self) -> [u32; 3] {
        self.exps
    }

    /// `|α|`
    pub fn order(&self) -> u32 {
        self.exponents().iter().sum()
    }

    /// `α! = Π αᵢ!`
    pub fn factorial(&self) -> f64 {
        self.exponents()
            .iter()
            .map(|&a| (1..=a as u64).product::<u64>() as f64)
            .product()
    }

    /// Evaluates the monomial `z^α` at the first `dim` coordinates of `z`.
    pub fn monomial(&self, z: &[f64]) -> f64 {
        self.exponents()
            .iter()
            .zip(z)
            .map(|(&e, &v)| v.powi(e as i32))
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.exponents().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// All multi-indices of total degree `degree` in `dim` dimensions, first
/// exponent descending (so `(2,0) < (1,1) < (0,2)`).
fn of_degree(dim: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut buf = [0u32; 3];
    fn rec(axis: usize, dim: usize, remaining: u32, buf: &mut [u32; 3], out: &mut Vec<MultiIndex>) {
        if axis == dim - 1 {
            buf[axis] = remaining;
            out.push(MultiIndex::new(&buf[..dim]).unwrap());
            return;
        }
        for e in (0..=remaining).rev() {
            buf[axis] = e;
            rec(axis + 1, dim, remaining - e, buf, out);
        }
    }
    rec(0, dim, degree, &mut buf, &mut out);
    out
}

/// Smallest moment degree constrained for an operator of the given order:
/// 0 for odd orders, 1 for even orders (the zeroth moment is free because the
/// `f(x_q) - f(x_p)` prefactor annihilates constants).
pub fn beta_min(order: u32) -> u32 {
    if order % 2 == 1 {
        0
    } else {
        1
    }
}

/// The multi-indices `β` with `β_min <= |β| <= order + r - 1` in graded order.
pub fn basis_multiindices(order: u32, r: u32, dim: usize) -> Result<Vec<MultiIndex>> {
    if order < 1 || r < 1 || !(1..=3).contains(&dim) {
        return Err(Error::InvalidInput(format!(
            "basis needs order >= 1, r >= 1 and dim in 1..=3 (got {order}, {r}, {dim})"
        )));
    }
    Ok((beta_min(order)..order + r)
        .flat_map(|deg| of_degree(dim, deg))
        .collect())
}

/// A linear differential operator `Σ D^α` over multi-indices of one common order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialOperator {
    terms: Vec<MultiIndex>,
    order: u32,
}

impl DifferentialOperator {
    pub fn new(terms: Vec<MultiIndex>) -> Result<Self> {
        let first = *terms
            .first()
            .ok_or_else(|| Error::InvalidInput("operator needs at least one term".into()))?;
        if first.order() == 0 {
            return Err(Error::InvalidInput(
                "operator order must be at least 1".into(),
            ));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.order() != first.order() || t.dim() != first.dim() {
                return Err(Error::InvalidInput(format!(
                    "term {t} differs in order or dimension from {first}"
                )));
            }
            if terms[..i].contains(t) {
                return Err(Error::InvalidInput(format!("duplicate term {t}")));
            }
        }
        Ok(Self {
            order: first.order(),
            terms,
        })
    }

    /// `Σ_i ∂²/∂x_i²` in `dim` dimensions.
    pub fn laplacian(dim: usize) -> Self {
        let terms = (0..dim)
            .map(|axis| {
                let mut e = [0u32; 3];
                e[axis] = 2;
                MultiIndex::new(&e[..dim]).unwrap()
            })
            .collect();
        Self::new(terms).unwrap()
    }

    /// `∂/∂x_axis` in `dim` dimensions.
    pub fn partial(dim: usize, axis: usize) -> Self {
        assert!(axis < dim && dim <= 3);
        let mut e = [0u32; 3];
        e[axis] = 1;
        Self::new(vec![MultiIndex::new(&e[..dim]).unwrap()]).unwrap()
    }

    pub fn terms(&self) -> &[MultiIndex] {
        &self.terms
    }

    /// `|α|`, shared by all terms.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    pub fn is_odd(&self) -> bool {
        self.order % 2 == 1
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
