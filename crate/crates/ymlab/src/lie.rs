//! Compact Lie algebra kernel: structure constants, adjoint action and a
//! positive ad-invariant hermitian product.
//!
//! The shipped algebra is su(2) with the basis orthonormalized so that
//! `k(e_a, e_b) = δ_ab` and `[e_a, e_b] = ε_abc e_c`; any positive rescaling
//! of the Killing form is admissible, unit scale keeps conditioning simple.
//! The abelian one-dimensional algebra is available as a degenerate
//! configuration for oracle runs.

use crate::{C64, CMat, CVec, Error, Result};
use crate::linalg::c64;
use ndarray::{Array2, Array3};

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub name: String,
    pub dim: usize,
    /// c[[a, b, c]] with [e_a, e_b] = Σ_c c[[a,b,c]] e_c.
    pub structure: Array3<f64>,
    /// The positive ad-invariant hermitian product on the (complexified)
    /// algebra, in the chosen real basis.
    pub product: Array2<f64>,
}

impl LieAlgebra {
    /// su(2), orthonormalized: [e_a, e_b] = ε_abc e_c, product = identity.
    pub fn su2() -> Self {
        let mut c = Array3::zeros((3, 3, 3));
        for a in 0..3 {
            for b in 0..3 {
                for k in 0..3 {
                    c[[a, b, k]] = levi_civita(a, b, k);
                }
            }
        }
        LieAlgebra {
            name: "su2".into(),
            dim: 3,
            structure: c,
            product: Array2::eye(3),
        }
    }

    /// Abelian u(1): all brackets vanish. Degenerate oracle configuration.
    pub fn u1() -> Self {
        LieAlgebra {
            name: "u1".into(),
            dim: 1,
            structure: Array3::zeros((1, 1, 1)),
            product: Array2::eye(1),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "su2" => Ok(Self::su2()),
            "u1" => Ok(Self::u1()),
            other => Err(Error::Config(format!("unknown algebra '{other}'"))),
        }
    }

    /// [X, Y] on coefficient vectors; bilinear over ℂ.
    pub fn bracket(&self, x: &CVec, y: &CVec) -> Result<CVec> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::Dimension(format!(
                "bracket expects coefficient vectors of length {}, got {} and {}",
                self.dim,
                x.len(),
                y.len()
            )));
        }
        let mut out = CVec::zeros(self.dim);
        for a in 0..self.dim {
            if x[a] == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..self.dim {
                let xy = x[a] * y[b];
                if xy == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..self.dim {
                    let s = self.structure[[a, b, k]];
                    if s != 0.0 {
                        out[k] += xy * s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of Y ↦ [X, Y] for a coefficient vector X.
    ///
    /// For real X the result is anti-hermitian with respect to the product:
    /// ad(X)* k + k ad(X) = 0.
    pub fn ad_matrix(&self, x: &CVec) -> Result<CMat> {
        if x.len() != self.dim {
            return Err(Error::Dimension(format!(
                "ad_matrix expects a coefficient vector of length {}, got {}",
                self.dim,
                x.len()
            )));
        }
        let mut m = CMat::zeros((self.dim, self.dim));
        for a in 0..self.dim {
            if x[a] == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..self.dim {
                for k in 0..self.dim {
                    let s = self.structure[[a, b, k]];
                    if s != 0.0 {
                        m[[k, b]] += x[a] * s;
                    }
                }
            }
        }
        Ok(m)
    }

    /// The product as a complex matrix.
    pub fn product_c(&self) -> CMat {
        self.product.mapv(|x| c64(x, 0.0))
    }

    /// Largest residual of the Jacobi identity over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        let basis: Vec<CVec> = (0..self.dim)
            .map(|a| CVec::from_shape_fn(self.dim, |i| c64((i == a) as u8 as f64, 0.0)))
            .collect();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let t1 = self.bracket(x, &self.bracket(y, z).unwrap()).unwrap();
                    let t2 = self.bracket(y, &self.bracket(z, x).unwrap()).unwrap();
                    let t3 = self.bracket(z, &self.bracket(x, y).unwrap()).unwrap();
                    let total: f64 = t1
                        .iter()
                        .zip(&t2)
                        .zip(&t3)
                        .map(|((a, b), c)| (a + b + c).norm())
                        .sum();
                    worst = worst.max(total);
                }
            }
        }
        worst
    }

    /// Largest entry of ad(e_a)* k + k ad(e_a) over the basis.
    pub fn ad_invariance_residual(&self) -> f64 {
        let k = self.product_c();
        let mut worst = 0.0f64;
        for a in 0..self.dim {
            let e = CVec::from_shape_fn(self.dim, |i| c64((i == a) as u8 as f64, 0.0));
            let ad = self.ad_matrix(&e).unwrap();
            let r = crate::linalg::dagger(&ad).dot(&k) + k.dot(&ad);
            worst = worst.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        worst
    }

    /// Validate all invariants (antisymmetry, Jacobi, ad-invariance,
    /// positivity of the product).
    pub fn validate(&self) -> Result<()> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                for k in 0..self.dim {
                    if (self.structure[[a, b, k]] + self.structure[[b, a, k]]).abs()
                        > crate::tol::LIE_ENTRYWISE
                    {
                        return Err(Error::Contract("structure constants not antisymmetric".into()));
                    }
                }
            }
        }
        if self.jacobi_residual() > crate::tol::LIE_JACOBI {
            return Err(Error::Contract("Jacobi identity violated".into()));
        }
        if self.ad_invariance_residual() > 10.0 * crate::tol::LIE_ENTRYWISE {
            return Err(Error::Contract("product is not ad-invariant".into()));
        }
        let (w, _) = crate::linalg::eigh_checked(&self.product_c())?;
        if w.iter().any(|&x| x <= 0.0) {
            return Err(Error::Contract("product is not positive definite".into()));
        }
        Ok(())
    }
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}
