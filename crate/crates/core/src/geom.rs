//! Geodesic equations of a two-dimensional metric.

use crate::jet::{reduce_on_shell, total_derivative, Coordinates, OdeSystem};
use crate::symexpr::{diff, is_zero, normalize, Atom, Expr};
use crate::{Error, Result};

/// Symmetric 2x2 metric in coordinates `(x1, x2)`.
#[derive(Clone, Debug)]
pub struct Metric2 {
    coords: [Atom; 2],
    g: [[Expr; 2]; 2],
}

impl Metric2 {
    pub fn new(coords: [Atom; 2], g: [[Expr; 2]; 2]) -> Result<Self> {
        if !is_zero(&(&g[0][1] - &g[1][0])) {
            return Err(Error::AsymmetricMetric);
        }
        let m = Metric2 { coords, g };
        if is_zero(&m.determinant()) {
            return Err(Error::SingularMetric);
        }
        Ok(m)
    }

    pub fn diagonal(coords: [Atom; 2], g11: Expr, g22: Expr) -> Result<Self> {
        Metric2::new(coords, [[g11, Expr::zero()], [Expr::zero(), g22]])
    }

    pub fn coords(&self) -> &[Atom; 2] {
        &self.coords
    }

    pub fn component(&self, a: usize, b: usize) -> &Expr {
        &self.g[a][b]
    }

    pub fn determinant(&self) -> Expr {
        &self.g[0][0] * &self.g[1][1] - &self.g[0][1] * &self.g[1][0]
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> Result<[[Expr; 2]; 2]> {
        let inv_det = normalize(&self.determinant())?.inv()?.to_expr();
        let g = &self.g;
        let entry = |e: Expr| -> Result<Expr> { Ok(normalize(&(e * inv_det.clone()))?.to_expr()) };
        Ok([
            [entry(g[1][1].clone())?, entry(-g[0][1].clone())?],
            [entry(-g[1][0].clone())?, entry(g[0][0].clone())?],
        ])
    }

    /// `g_ab x'^a x'^b`.
    pub fn line_element(&self) -> Expr {
        let v: Vec<Expr> = self.coords.iter().map(|x| Expr::atom(&x.jet(1))).collect();
        Expr::sum((0..2).flat_map(|a| {
            let v = v.clone();
            (0..2).map(move |b| self.g[a][b].clone() * v[a].clone() * v[b].clone())
        }))
    }
}

/// Christoffel symbols of the second kind, indexed `[a][b][c]` for `Γ^a_bc`.
#[derive(Clone, Debug)]
pub struct Christoffel(pub [[[Expr; 2]; 2]; 2]);

impl Christoffel {
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Expr {
        &self.0[a][b][c]
    }
}

/// `Γ^a_bc = 1/2 g^ad (g_bd,c + g_cd,b - g_bc,d)`.
pub fn christoffel(m: &Metric2) -> Result<Christoffel> {
    let inv = m.inverse()?;
    let dg = |i: usize, j: usize, k: usize| diff(&m.g[i][j], &m.coords[k]);
    let mut out: [[[Expr; 2]; 2]; 2] = Default::default();
    for (a, plane) in out.iter_mut().enumerate() {
        for (b, row) in plane.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                let sum = Expr::sum(
                    (0..2).map(|d| inv[a][d].clone() * (dg(b, d, c) + dg(c, d, b) - dg(b, c, d))),
                );
                *slot = normalize(&(Expr::frac(1, 2) * sum))?.to_expr();
            }
        }
    }
    Ok(Christoffel(out))
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

/// `x''^a = -Γ^a_bc x'^b x'^c` with `indep` as the curve parameter.
pub fn geodesic_system(m: &Metric2, indep: &Atom) -> Result<OdeSystem> {
    let gamma = christoffel(m)?;
    let v: Vec<Expr> = m.coords.iter().map(|x| Expr::atom(&x.jet(1))).collect();
    let rhs = (0..2)
        .map(|a| {
            let sum = Expr::sum((0..2).flat_map(|b| {
                let v = v.clone();
                let g = &gamma;
                (0..2).map(move |c| g.get(a, b, c).clone() * v[b].clone() * v[c].clone())
            }));
            Ok(normalize(&-sum)?.to_expr())
        })
        .collect::<Result<Vec<_>>>()?;
    OdeSystem::new(Coordinates::new(indep.clone(), m.coords.to_vec()), rhs)
}

/// Whether the line element is a first integral of the geodesic flow.
pub fn conserves_line_element(m: &Metric2, sys: &OdeSystem) -> Result<bool> {
    let d = total_derivative(&m.line_element(), sys)?;
    Ok(is_zero(&reduce_on_shell(&d, sys, false)))
}
