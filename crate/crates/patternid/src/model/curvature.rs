//! Geometric operators for the mechano-chemical model: finite-difference
//! curvature stack, arc length, and the tissue/morphogen derivative.
//!
//! First derivatives use the forward difference D_h, higher derivatives
//! central differences. Neumann closure supplies the ghost values
//! u_0 = u_1, u_{-1} = u_3 - 2 u_2 + 2 u_1 (mirrored on the right).

use super::{FixedParams, ModelError, ModelKind, ModelSpec};
use crate::grid::Grid;

/// Finite-difference derivative and curvature fields of a tissue profile.
#[derive(Debug, Clone)]
pub struct CurvatureWorkspace {
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d3: Vec<f64>,
    pub d4: Vec<f64>,
    /// Local curvature kappa_h.
    pub kappa: Vec<f64>,
    /// First spatial derivative of the curvature.
    pub kappa_d1: Vec<f64>,
    /// Second spatial derivative of the curvature.
    pub kappa_d2: Vec<f64>,
    /// Lagrange multiplier paired with this profile by the constrained
    /// integrator; zero until one is solved for.
    pub lambda: f64,
}

fn ghost_extend(u: &[f64]) -> Vec<f64> {
    let m = u.len();
    let mut ext = Vec::with_capacity(m + 4);
    ext.push(u[2] - 2.0 * u[1] + 2.0 * u[0]);
    ext.push(u[0]);
    ext.extend_from_slice(u);
    ext.push(u[m - 1]);
    ext.push(2.0 * u[m - 1] - 2.0 * u[m - 2] + u[m - 3]);
    ext
}

/// Assemble the derivative and curvature fields for a tissue profile.
pub fn curvature_ops(u: &[f64], grid: &Grid) -> Result<CurvatureWorkspace, ModelError> {
    let m = u.len();
    if m < 5 {
        return Err(ModelError::GridTooSmall { got: m, need: 5 });
    }
    let h = grid.spacing();
    let ext = ghost_extend(u);
    let mut ws = CurvatureWorkspace {
        d1: vec![0.0; m],
        d2: vec![0.0; m],
        d3: vec![0.0; m],
        d4: vec![0.0; m],
        kappa: vec![0.0; m],
        kappa_d1: vec![0.0; m],
        kappa_d2: vec![0.0; m],
        lambda: 0.0,
    };
    let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);
    for j in 0..m {
        let e = j + 2;
        let d1 = (ext[e + 1] - ext[e]) / h;
        let d2 = (ext[e + 1] - 2.0 * ext[e] + ext[e - 1]) / h2;
        let d3 = (ext[e + 2] - 2.0 * ext[e + 1] + 2.0 * ext[e - 1] - ext[e - 2]) / (2.0 * h3);
        let d4 = (ext[e + 2] - 4.0 * ext[e + 1] + 6.0 * ext[e] - 4.0 * ext[e - 1] + ext[e - 2]) / h4;
        let q = 1.0 + d1 * d1;
        let (q32, q52, q72) = (q.powf(1.5), q.powf(2.5), q.powf(3.5));
        ws.d1[j] = d1;
        ws.d2[j] = d2;
        ws.d3[j] = d3;
        ws.d4[j] = d4;
        ws.kappa[j] = d2 / q32;
        ws.kappa_d1[j] = d3 / q32 - 3.0 * d1 * d2 * d2 / q52;
        ws.kappa_d2[j] = d4 / q32 - 3.0 * d1 * d2 * d3 / q52
            - 3.0 * (d2 * d2 * d2 + 2.0 * d1 * d2 * d3) / q52
            + 15.0 * d1 * d1 * d2 * d2 * d2 / q72;
    }
    Ok(ws)
}

#[inline]
fn arc_slopes(u: &[f64], h: f64) -> impl Iterator<Item = f64> + '_ {
    let m = u.len();
    (0..m).map(move |j| {
        // last node reuses the preceding forward difference
        let jj = j.min(m - 2);
        (u[jj + 1] - u[jj]) / h
    })
}

/// Discrete arc length: trapezoidal sum of sqrt(1 + D_h[u]^2) with
/// half-weights at both endpoints.
pub fn arc_length(u: &[f64], grid: &Grid) -> f64 {
    let m = u.len();
    let h = grid.spacing();
    let mut total = 0.0;
    for (j, d) in arc_slopes(u, h).enumerate() {
        let weight = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
        total += weight * (1.0 + d * d).sqrt();
    }
    h * total
}

/// Gradient of [`arc_length`] with respect to the tissue profile.
pub fn arc_length_gradient(u: &[f64], grid: &Grid) -> Vec<f64> {
    let m = u.len();
    let h = grid.spacing();
    // effective weight of each forward slope after merging the duplicated
    // last-node slope into the second-to-last one
    let mut weight = vec![1.0; m - 1];
    weight[0] = 0.5;
    weight[m - 2] += 0.5;
    let mut grad = vec![0.0; m];
    for j in 0..m - 1 {
        let d = (u[j + 1] - u[j]) / h;
        let t = weight[j] * d / (1.0 + d * d).sqrt();
        grad[j + 1] += t;
        grad[j] -= t;
    }
    grad
}

/// Mechano-chemical time derivative for a given Lagrange multiplier and the
/// trajectory's stored initial curvature.
pub(super) fn mc_rhs(
    spec: &ModelSpec,
    y: &[f64],
    lambda: f64,
    kappa0: &[f64],
    dy: &mut [f64],
) -> Result<(), ModelError> {
    let n = spec.grid.node_count();
    if y.len() != 2 * n || dy.len() != 2 * n {
        return Err(ModelError::StateLength { got: y.len(), want: 2 * n });
    }
    if kappa0.len() != n {
        return Err(ModelError::StateLength { got: kappa0.len(), want: n });
    }
    let (beta, eta, tau) = match spec.fixed {
        FixedParams::Mc { beta, eta, tau } => (beta, eta, tau),
        _ => return Err(ModelError::UnsupportedKind(ModelKind::Mc)),
    };
    let [diffusion, alpha] = spec.theta;
    let domain_len = spec.grid.length;
    let h = spec.grid.spacing();
    let (u, phi) = y.split_at(n);
    let ws = curvature_ops(u, &spec.grid)?;

    // morphogen ghost closure: phi_0 = phi_1, phi_{N+1} = phi_N
    let mut phi_ext = Vec::with_capacity(n + 2);
    phi_ext.push(phi[0]);
    phi_ext.extend_from_slice(phi);
    phi_ext.push(phi[n - 1]);

    let (du, dphi) = dy.split_at_mut(n);
    for j in 0..n {
        let e = j + 1;
        let d1p = (phi_ext[e + 1] - phi_ext[e]) / h;
        let d2p = (phi_ext[e + 1] - 2.0 * phi_ext[e] + phi_ext[e - 1]) / (h * h);
        let q = 1.0 + ws.d1[j] * ws.d1[j];
        let sq = q.sqrt();

        let kbar = -beta * phi[j];
        let kbar_d1 = -beta * d1p;
        let kbar_d2 = -beta * d2p;

        // morphogen production driven by curvature deviation from t = 0
        let dk = (kappa0[j] - ws.kappa[j]).max(0.0);
        let production = eta * dk / (1.0 + dk);

        dphi[j] = diffusion * (d2p / sq - d1p * ws.d1[j] * ws.d2[j] / (q * sq))
            - alpha * phi[j]
            + production;

        let k = ws.kappa[j];
        du[j] = -(domain_len / tau)
            * ((ws.kappa_d2[j] - kbar_d2) / q
                - (ws.kappa_d1[j] - kbar_d1) * ws.d1[j] * ws.d2[j] / (q * q)
                - (k - kbar) * k * k
                + lambda * k);
    }
    if dy.iter().sum::<f64>().is_finite() {
        Ok(())
    } else {
        Err(ModelError::NumericDomain)
    }
}
