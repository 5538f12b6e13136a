//! Second-derivative jet of the potential and its determinant.
//!
//! For a potential Phi = sum B_{k,l}(w, wbar) z^k zbar^l on a neighborhood
//! of the divisor {z = 0}, the Kahler metric it induces has entries
//!
//!   g_{i jbar}  = d^2 Phi / dw_i dwbar_j            (tangential block)
//!   g_{i nbar}  = d^2 Phi / dw_i dzbar
//!   g_{n jbar}  = d^2 Phi / dz dwbar_j
//!   g_{n nbar}  = d^2 Phi / dz dzbar
//!
//! with n = nw + 1 the normal slot. All entries are stored on the common
//! guaranteed window (K-1, L-1) obtained after one z and one zbar
//! derivative of a series known through (K, L).

use dcma_series::{C64, Coeff, SeriesError, TruncatedBiSeries, Var, WPolynomial};
use nalgebra::{Complex, DMatrix};

use crate::error::SolverError;

/// Hermitian jet of second derivatives of a potential. `entries[i][j]`
/// holds d^2 Phi / dv_i dvbar_j where v_0..v_{nw-1} are the divisor
/// coordinates and v_nw = z.
#[derive(Debug, Clone)]
pub struct MetricJet<T: Coeff> {
    n: usize,
    entries: Vec<Vec<TruncatedBiSeries<T>>>,
}

impl<T: Coeff> MetricJet<T> {
    /// Total dimension, tangential slots plus the normal one.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncatedBiSeries<T> {
        &self.entries[i][j]
    }

    pub fn shape(&self) -> (usize, usize, usize, usize) {
        self.entries[0][0].shape()
    }

    /// Numeric value of the full matrix at a point, symmetrized so that
    /// rounding cannot break Hermiticity.
    pub fn eval_matrix(&self, w: &[C64], z: C64) -> DMatrix<Complex<f64>> {
        let n = self.n;
        let mut m = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                let v = self.entries[i][j].eval(w, z);
                m[(i, j)] = Complex::new(v.re, v.im);
            }
        }
        let adj = m.adjoint();
        (m + adj).scale(0.5)
    }

    /// Verifies entries[j][i] = conj(entries[i][j]) on the overlap of the
    /// two guaranteed windows.
    pub fn hermitian_check(&self) -> Result<(), SolverError> {
        let (kmax, lmax, _, _) = self.shape();
        let kk = kmax.min(lmax);
        for i in 0..self.n {
            for j in i..self.n {
                let a = self.entries[i][j].restrict(kk, kk);
                let b = self.entries[j][i].conj().restrict(kk, kk);
                if a != b {
                    return Err(SolverError::JetNotHermitian { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// Builds the metric jet of a real potential. The reality symmetry
/// B_{l,k} = conj(B_{k,l}) is what makes the jet Hermitian, so a series
/// that fails it is rejected with the offending index pair.
pub fn assemble_metric_jet<T: Coeff>(
    phi: &TruncatedBiSeries<T>,
) -> Result<MetricJet<T>, SolverError> {
    if let Some(pair) = phi.reality_violation() {
        return Err(SolverError::NonRealPotential(pair));
    }
    assemble_jet_unchecked(phi)
}

/// Jet assembly without the reality gate, for callers that manipulate
/// intermediate non-symmetric data and check afterwards.
pub fn assemble_jet_unchecked<T: Coeff>(
    phi: &TruncatedBiSeries<T>,
) -> Result<MetricJet<T>, SolverError> {
    let nw = phi.nw();
    let n = nw + 1;
    let kmax = phi.kmax().saturating_sub(1);
    let lmax = phi.lmax().saturating_sub(1);

    let mut entries: Vec<Vec<TruncatedBiSeries<T>>> = Vec::with_capacity(n);
    for i in 0..n {
        let di = if i < nw {
            phi.diff(Var::W(i))?
        } else {
            phi.diff(Var::Z)?
        };
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let dij = if j < nw {
                di.diff(Var::WBar(j))?
            } else {
                di.diff(Var::ZBar)?
            };
            row.push(dij.restrict(kmax, lmax));
        }
        entries.push(row);
    }
    Ok(MetricJet { n, entries })
}

fn series_one<T: Coeff>(shape: (usize, usize, usize, usize)) -> TruncatedBiSeries<T> {
    let (kmax, lmax, nw, cap) = shape;
    let mut one = TruncatedBiSeries::zero(kmax, lmax, nw, cap);
    one.set_coeff(0, 0, WPolynomial::constant(nw, cap, T::one()))
        .expect("constant fits any window");
    one
}

/// Determinant of a square matrix of series by Laplace expansion along
/// the first row.
pub fn series_matrix_det<T: Coeff>(
    mat: &[Vec<TruncatedBiSeries<T>>],
    shape: (usize, usize, usize, usize),
) -> Result<TruncatedBiSeries<T>, SeriesError> {
    let n = mat.len();
    if n == 0 {
        return Ok(series_one(shape));
    }
    if n == 1 {
        return Ok(mat[0][0].clone());
    }
    let (kmax, lmax, nw, cap) = shape;
    let mut acc = TruncatedBiSeries::zero(kmax, lmax, nw, cap);
    for col in 0..n {
        if mat[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<TruncatedBiSeries<T>>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let sub = series_matrix_det(&minor, shape)?;
        let term = mat[0][col].mul(&sub)?;
        acc = if col % 2 == 0 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    Ok(acc)
}

fn permutations_signed(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (perm, sign) in permutations_signed(n - 1) {
        for pos in 0..n {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            let hops = (perm.len() - pos) as u32;
            let s = if hops % 2 == 0 { sign } else { -sign };
            out.push((p, s));
        }
    }
    out
}

/// Determinant as a full signed sum over permutations. Slower than the
/// cofactor route but structurally independent of it, which is the point:
/// the two must agree.
pub fn series_det_leibniz<T: Coeff>(
    mat: &[Vec<TruncatedBiSeries<T>>],
    shape: (usize, usize, usize, usize),
) -> Result<TruncatedBiSeries<T>, SeriesError> {
    let n = mat.len();
    let (kmax, lmax, nw, cap) = shape;
    let mut acc = TruncatedBiSeries::zero(kmax, lmax, nw, cap);
    for (perm, sign) in permutations_signed(n) {
        let mut term = series_one::<T>(shape);
        for (row, col) in perm.iter().enumerate() {
            term = term.mul(&mat[row][*col])?;
        }
        term = term.scale(&T::from_i64(sign));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Determinant of the full jet through the cofactor expansion along the
/// normal row and column: with G0 the tangential block,
///
///   det G = g_{n nbar} det G0
///         + sum_i (-1)^{i+n} g_{n ibar} sum_j (-1)^{j+n-1} g_{j nbar} (-1)^{i+j} M^{j,i}
///
/// where M^{j,i} is the (j,i) cofactor of G0 and the indices i, j run
/// over the tangential slots (1-based in the formula above).
pub fn det_cofactor<T: Coeff>(jet: &MetricJet<T>) -> Result<TruncatedBiSeries<T>, SolverError> {
    let n = jet.n;
    let nw = n - 1;
    let shape = jet.shape();

    let tangential: Vec<Vec<TruncatedBiSeries<T>>> = (0..nw)
        .map(|i| (0..nw).map(|j| jet.entries[i][j].clone()).collect())
        .collect();
    let det_g0 = series_matrix_det(&tangential, shape)?;

    let mut acc = jet.entries[nw][nw].mul(&det_g0)?;
    for i in 1..=nw {
        if jet.entries[nw][i - 1].is_zero() {
            continue;
        }
        let mut inner = TruncatedBiSeries::zero(shape.0, shape.1, shape.2, shape.3);
        for j in 1..=nw {
            if jet.entries[j - 1][nw].is_zero() {
                continue;
            }
            let minor: Vec<Vec<TruncatedBiSeries<T>>> = (0..nw)
                .filter(|r| *r != j - 1)
                .map(|r| {
                    (0..nw)
                        .filter(|c| *c != i - 1)
                        .map(|c| tangential[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = series_matrix_det(&minor, shape)?;
            let sign = (j + i) % 2 == 0;
            let signed_cof = if sign { cof } else { cof.neg() };
            let mut term = jet.entries[j - 1][nw].mul(&signed_cof)?;
            if (j + n - 1) % 2 == 1 {
                term = term.neg();
            }
            if (i + j) % 2 == 1 {
                term = term.neg();
            }
            inner = inner.add(&term)?;
        }
        let mut outer = jet.entries[nw][i - 1].mul(&inner)?;
        if (i + n) % 2 == 1 {
            outer = outer.neg();
        }
        acc = acc.add(&outer)?;
    }
    Ok(acc)
}

/// Mixed Hessian of a divisor potential: H[i][j] = d^2 b / dw_i dwbar_j.
pub fn tangential_hessian<T: Coeff>(
    b: &WPolynomial<T>,
) -> Result<Vec<Vec<WPolynomial<T>>>, SeriesError> {
    let nw = b.nw();
    let mut rows = Vec::with_capacity(nw);
    for i in 0..nw {
        let di = b.diff_w(i)?;
        let mut row = Vec::with_capacity(nw);
        for j in 0..nw {
            row.push(di.diff_wbar(j)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Determinant of a square matrix of truncated polynomials, Laplace
/// expansion along the first row. An empty matrix has determinant one.
pub fn poly_matrix_det<T: Coeff>(
    mat: &[Vec<WPolynomial<T>>],
    nw: usize,
    cap: usize,
) -> Result<WPolynomial<T>, SeriesError> {
    let n = mat.len();
    if n == 0 {
        return Ok(WPolynomial::constant(nw, cap, T::one()));
    }
    if n == 1 {
        return Ok(mat[0][0].clone());
    }
    let mut acc = WPolynomial::zero(nw, cap);
    for col in 0..n {
        if mat[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<WPolynomial<T>>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let sub = poly_matrix_det(&minor, nw, cap)?;
        let term = mat[0][col].mul(&sub)?;
        acc = if col % 2 == 0 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    Ok(acc)
}

/// Inverse of a polynomial matrix with invertible constant part, via the
/// adjugate divided by the truncated determinant.
pub fn poly_matrix_inverse<T: Coeff>(
    mat: &[Vec<WPolynomial<T>>],
    nw: usize,
    cap: usize,
    tol: f64,
) -> Result<Vec<Vec<WPolynomial<T>>>, SeriesError> {
    let n = mat.len();
    let det = poly_matrix_det(mat, nw, cap)?;
    let det_inv = det.invert(tol)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = vec![vec![WPolynomial::zero(nw, cap); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<WPolynomial<T>>> = (0..n)
                .filter(|r| *r != j)
                .map(|r| {
                    (0..n)
                        .filter(|c| *c != i)
                        .map(|c| mat[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = poly_matrix_det(&minor, nw, cap)?;
            let signed = if (i + j) % 2 == 0 { cof } else { cof.neg() };
            out[i][j] = signed.mul(&det_inv)?;
        }
    }
    Ok(out)
}
