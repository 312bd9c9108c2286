//! Vertex couplings in ST-form and their on-shell scattering matrices.
//!
//! A coupling of degree `n` is given by `r`, a Hermitian `r x r` matrix `S`
//! and an `r x (n-r)` matrix `T`; the boundary values satisfy
//! `[I T; 0 0] psi' = [S 0; -T* I] psi`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexCoupling {
    degree: usize,
    r: usize,
    s: CMatrix,
    t: CMatrix,
}

impl VertexCoupling {
    pub fn new(degree: usize, r: usize, s: CMatrix, t: CMatrix) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("vertex degree must be at least 1".into()));
        }
        if r > degree {
            return Err(Error::InvalidInput(format!("rank r = {r} exceeds degree {degree}")));
        }
        if s.shape() != (r, r) {
            return Err(Error::InvalidInput(format!("S must be {r}x{r}, got {}x{}", s.nrows(), s.ncols())));
        }
        if t.shape() != (r, degree - r) {
            return Err(Error::InvalidInput(format!("T must be {r}x{}, got {}x{}", degree - r, t.nrows(), t.ncols())));
        }
        if s != s.adjoint() {
            return Err(Error::InvalidInput("S must be Hermitian".into()));
        }
        Ok(Self { degree, r, s, t })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn t(&self) -> &CMatrix {
        &self.t
    }

    /// True when the scattering matrix does not depend on `k`.
    pub fn is_scale_invariant(&self) -> bool {
        self.s.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }
}

/// Continuity at the vertex and `sum psi'_j = alpha psi`.
pub fn delta_coupling(degree: usize, alpha: f64) -> Result<VertexCoupling> {
    if degree == 0 {
        return Err(Error::InvalidInput("vertex degree must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("coupling must be finite, got {alpha}")));
    }
    VertexCoupling::new(
        degree,
        1,
        CMatrix::from_element(1, 1, Complex64::new(alpha, 0.0)),
        CMatrix::from_element(1, degree - 1, Complex64::new(1.0, 0.0)),
    )
}

/// The same coupling with the Robin part `S` replaced by zero.
pub fn associated_scale_invariant(c: &VertexCoupling) -> VertexCoupling {
    VertexCoupling { s: CMatrix::zeros(c.r, c.r), ..c.clone() }
}

/// `S(k) = -I + 2 [I; T*] (I + T T* - S/(ik))^(-1) [I T]`.
pub fn vertex_scattering(c: &VertexCoupling, k: f64) -> Result<CMatrix> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::NonPositiveMomentum(k));
    }
    let n = c.degree;
    let r = c.r;
    let mut out = -CMatrix::identity(n, n);
    if r == 0 {
        return Ok(out);
    }
    let middle = CMatrix::identity(r, r) + &c.t * c.t.adjoint() + c.s.map(|z| z * Complex64::new(0.0, 1.0 / k));
    let inverse = middle.lu().try_inverse().ok_or(Error::CouplingResonance(k))?;
    let mut left = CMatrix::zeros(n, r);
    left.view_mut((0, 0), (r, r)).copy_from(&CMatrix::identity(r, r));
    left.view_mut((r, 0), (n - r, r)).copy_from(&c.t.adjoint());
    let mut right = CMatrix::zeros(r, n);
    right.view_mut((0, 0), (r, r)).copy_from(&CMatrix::identity(r, r));
    right.view_mut((0, r), (r, n - r)).copy_from(&c.t);
    out += (left * inverse * right).map(|z| z * 2.0);
    Ok(out)
}

#[cfg(test)]
pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unitarity_defect(m: &CMatrix) -> f64 {
        max_abs(&(m * m.adjoint() - CMatrix::identity(m.nrows(), m.nrows())))
    }

    #[test]
    fn kirchhoff_degree_two_is_transparent() {
        let s = vertex_scattering(&delta_coupling(2, 0.0).unwrap(), 3.0).unwrap();
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(max_abs(&(s - swap)) < 1e-15);
    }

    #[test]
    fn neumann_endpoint() {
        let s = vertex_scattering(&delta_coupling(1, 0.0).unwrap(), 2.0).unwrap();
        assert!((s[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn delta_reflection_coefficient() {
        // r = -i alpha / (2k + i alpha) for a delta on a line.
        let (alpha, k) = (3.0, 1.7);
        let s = vertex_scattering(&delta_coupling(2, alpha).unwrap(), k).unwrap();
        let expected = c(0.0, -alpha) / c(2.0 * k, alpha);
        assert!((s[(0, 0)] - expected).norm() < 1e-14);
    }

    #[test]
    fn unitary_for_many_couplings() {
        let st = VertexCoupling::new(
            3,
            2,
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, -2.0), c(0.5, 2.0), c(-3.0, 0.0)]),
            CMatrix::from_row_slice(2, 1, &[c(1.0, 1.0), c(-2.0, 0.5)]),
        )
        .unwrap();
        let couplings =
            [delta_coupling(4, 2.0).unwrap(), delta_coupling(4, -7.0).unwrap(), delta_coupling(3, 0.0).unwrap(), st];
        for coupling in &couplings {
            for k in [0.1, 1.0, 10.0, 100.0] {
                assert!(unitarity_defect(&vertex_scattering(coupling, k).unwrap()) <= 1e-10);
            }
        }
    }

    #[test]
    fn scale_invariant_couplings_do_not_depend_on_k() {
        let c0 = associated_scale_invariant(&delta_coupling(4, 2.0).unwrap());
        assert!(c0.is_scale_invariant());
        assert_eq!(associated_scale_invariant(&c0), c0);
        assert_eq!(c0, delta_coupling(4, 0.0).unwrap());
        let s1 = vertex_scattering(&c0, 1.0).unwrap();
        let s17 = vertex_scattering(&c0, 17.0).unwrap();
        assert!(max_abs(&(s1 - s17)) <= 1e-12);
    }

    #[test]
    fn high_energy_limit_is_the_scale_invariant_matrix() {
        let coupling = delta_coupling(4, 2.0).unwrap();
        let s0 = vertex_scattering(&associated_scale_invariant(&coupling), 1.0).unwrap();
        let d3 = max_abs(&(vertex_scattering(&coupling, 1e3).unwrap() - &s0));
        let d6 = max_abs(&(vertex_scattering(&coupling, 1e6).unwrap() - &s0));
        assert!(d3 < 1e-2);
        let exponent = (d3 / d6).log10() / 3.0;
        assert!(exponent >= 0.99, "decay exponent {exponent}");
    }

    #[test]
    fn invalid_couplings() {
        assert!(delta_coupling(0, 1.0).is_err());
        let not_hermitian = CMatrix::from_element(1, 1, c(1.0, 1.0));
        assert!(VertexCoupling::new(2, 1, not_hermitian, CMatrix::zeros(1, 1)).is_err());
        assert!(VertexCoupling::new(2, 3, CMatrix::zeros(3, 3), CMatrix::zeros(3, 0)).is_err());
        assert_eq!(vertex_scattering(&delta_coupling(2, 1.0).unwrap(), 0.0), Err(Error::NonPositiveMomentum(0.0)));
    }
}
