use num_complex::Complex64;

use crate::error::{Error, Result};

/// Modulus tolerance for a parameter to count as unimodular.
pub const UNIT_TOL: f64 = 1e-10;

/// Schur parameters `gamma_0, ..., gamma_k`.
///
/// When `terminated` is set the last parameter is unimodular (stored
/// normalized to modulus exactly one) and the function is a Blaschke product
/// of degree `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurChain {
    parameters: Vec<Complex64>,
    terminated: bool,
}

impl SchurChain {
    /// Builds a chain from explicit parameters. All but the last must lie in
    /// the open disk; the last may be unimodular, which terminates the chain.
    pub fn new(parameters: Vec<Complex64>) -> Result<Self> {
        if parameters.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let last = parameters.len() - 1;
        let mut params = parameters;
        let mut terminated = false;
        for (k, g) in params.iter_mut().enumerate() {
            let m = g.norm();
            if m > 1.0 + UNIT_TOL {
                return Err(Error::NotSchur { index: k, modulus: m });
            }
            if (1.0 - m).abs() <= UNIT_TOL {
                if k != last {
                    return Err(Error::WrongTermination { expected: last, got: k });
                }
                *g /= m;
                terminated = true;
            }
        }
        Ok(SchurChain { parameters: params, terminated })
    }

    pub fn parameters(&self) -> &[Complex64] {
        &self.parameters
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// Index of the last stored parameter.
    pub fn last_index(&self) -> usize {
        self.parameters.len() - 1
    }
}

/// Taylor coefficients of the Schur iterates: row `k` holds
/// `c^(k)_0, ..., c^(k)_(n-k)` of `f_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntermediateTaylorTable {
    rows: Vec<Vec<Complex64>>,
}

impl IntermediateTaylorTable {
    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn coeff(&self, k: usize, j: usize) -> Option<Complex64> {
        self.rows.get(k).and_then(|r| r.get(j)).copied()
    }
}

/// Runs Schur's algorithm on the Taylor data `c_0, ..., c_n`.
///
/// Stops at the first unimodular parameter. Fails if some parameter has
/// modulus above `1 + UNIT_TOL`, since then no Schur function has this data.
pub fn schur_parameters(taylor: &[Complex64]) -> Result<(SchurChain, IntermediateTaylorTable)> {
    if taylor.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let mut rows = vec![taylor.to_vec()];
    let mut params = Vec::with_capacity(taylor.len());
    loop {
        let k = rows.len() - 1;
        let row = &rows[k];
        let g = row[0];
        let m = g.norm();
        if m > 1.0 + UNIT_TOL {
            return Err(Error::NotSchur { index: k, modulus: m });
        }
        if (1.0 - m).abs() <= UNIT_TOL {
            params.push(g / m);
            let chain = SchurChain { parameters: params, terminated: true };
            return Ok((chain, IntermediateTaylorTable { rows }));
        }
        params.push(g);
        if row.len() == 1 {
            break;
        }
        let next = next_iterate(row, g);
        rows.push(next);
    }
    Ok((SchurChain { parameters: params, terminated: false }, IntermediateTaylorTable { rows }))
}

/// Parameters `gamma_0..gamma_n` as plain rational functions of the data,
/// with no termination and no modulus check. Used for finite differences
/// around data that sits on the boundary of the Schur class.
pub fn schur_parameters_raw(taylor: &[Complex64]) -> Vec<Complex64> {
    let mut row = taylor.to_vec();
    let mut params = Vec::with_capacity(taylor.len());
    while !row.is_empty() {
        let g = row[0];
        params.push(g);
        row = next_iterate(&row, g);
    }
    params
}

/// Taylor data of `f_(k+1)` from that of `f_k`.
///
/// Equating coefficients of `z^(j+1)` in
/// `z f_(k+1) (1 - conj(g) f_k) = f_k - g` gives
/// `c'_j (1 - |g|^2) = c_(j+1) + conj(g) sum_(i<j) c'_i c_(j-i)`.
fn next_iterate(row: &[Complex64], g: Complex64) -> Vec<Complex64> {
    let len = row.len().saturating_sub(1);
    let scale = 1.0 - g.norm_sqr();
    let mut next: Vec<Complex64> = Vec::with_capacity(len);
    for j in 0..len {
        let mut acc = Complex64::default();
        for i in 0..j {
            acc += next[i] * row[j - i];
        }
        next.push((row[j + 1] + g.conj() * acc) / scale);
    }
    next
}
