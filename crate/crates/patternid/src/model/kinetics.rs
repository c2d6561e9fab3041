//! Reaction kinetics and fused stencil/kinetics derivative loops for the
//! reaction-diffusion and reaction-diffusion-ODE models.

use super::{FixedParams, ModelError, ModelKind, ModelSpec};

/// Supremum over grid nodes of the kinetics Jacobian row sums, one value per
/// component equation. Diffusion stencil contributions are added by the
/// spectral-bound code analytically.
#[derive(Debug, Clone, Copy)]
pub struct KineticsBound {
    pub first: f64,
    pub second: f64,
}

#[inline(always)]
fn check_finite(dy: &[f64]) -> Result<(), ModelError> {
    if dy.iter().sum::<f64>().is_finite() {
        Ok(())
    } else {
        Err(ModelError::NumericDomain)
    }
}

/// Five-point Laplacian with mirrored ghost nodes, fused with kinetics.
#[inline(always)]
fn rd_loop<K>(m: usize, c1: f64, c2: f64, v: &[f64], w: &[f64], dv: &mut [f64], dw: &mut [f64], kin: K)
where
    K: Fn(f64, f64) -> (f64, f64),
{
    for i in 0..m {
        let up = if i == 0 { i } else { i - 1 };
        let dn = if i == m - 1 { i } else { i + 1 };
        let (vr, vu, vd) = (&v[i * m..(i + 1) * m], &v[up * m..up * m + m], &v[dn * m..dn * m + m]);
        let (wr, wu, wd) = (&w[i * m..(i + 1) * m], &w[up * m..up * m + m], &w[dn * m..dn * m + m]);
        let drv = &mut dv[i * m..(i + 1) * m];
        let drw = &mut dw[i * m..(i + 1) * m];
        for j in 0..m {
            let lf = if j == 0 { j } else { j - 1 };
            let rt = if j == m - 1 { j } else { j + 1 };
            let lap_v = vu[j] + vd[j] + vr[lf] + vr[rt] - 4.0 * vr[j];
            let lap_w = wu[j] + wd[j] + wr[lf] + wr[rt] - 4.0 * wr[j];
            let (f, g) = kin(vr[j], wr[j]);
            drv[j] = c1 * lap_v + f;
            drw[j] = c2 * lap_w + g;
        }
    }
}

pub(super) fn rd_rhs(spec: &ModelSpec, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
    let m = spec.grid.nodes_per_axis;
    let n = m * m;
    let h2_inv = 1.0 / (spec.grid.spacing() * spec.grid.spacing());
    let (v, w) = y.split_at(n);
    let (dv, dw) = dy.split_at_mut(n);
    let [t0, t1] = spec.theta;
    match (spec.kind, &spec.fixed) {
        (ModelKind::Fhn, FixedParams::Fhn { nu1, nu2, alpha }) => {
            let (mu, eps, alpha) = (t0, t1, *alpha);
            rd_loop(m, nu1 * h2_inv, nu2 * h2_inv, v, w, dv, dw, |v, w| {
                (eps * (w - alpha * v), -v + mu * w - w * w * w)
            });
        }
        (ModelKind::Gm, FixedParams::Gm { nu1, nu2 }) => {
            // v^2 / w blows up as w -> 0; abort instead of clamping
            if let Some(node) = w.iter().position(|&x| x <= 0.0) {
                return Err(ModelError::KineticsSingularity { node, value: w[node] });
            }
            let (mu_v, mu_w) = (t0, t1);
            rd_loop(m, nu1 * h2_inv, nu2 * h2_inv, v, w, dv, dw, |v, w| {
                (-mu_v * v + v * v / w, -mu_w * w + v * v)
            });
        }
        (ModelKind::Bz, FixedParams::Bz { nu1, nu2 }) => {
            let (a, b) = (t0, t1);
            rd_loop(m, nu1 * h2_inv, nu2 * h2_inv, v, w, dv, dw, |v, w| {
                let vvw = v * v * w;
                (a - (b + 1.0) * v + vvw, b * v - vvw)
            });
        }
        _ => return Err(ModelError::UnsupportedKind(spec.kind)),
    }
    check_finite(dy)
}

pub(super) fn rdode_rhs(spec: &ModelSpec, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
    let n = spec.grid.node_count();
    let (diffusion, m3, k) = match spec.fixed {
        FixedParams::Rdode { diffusion, m3, k, .. } => (diffusion, m3, k),
        _ => return Err(ModelError::UnsupportedKind(spec.kind)),
    };
    let [m1, m2] = spec.theta;
    let h2_inv = 1.0 / (spec.grid.spacing() * spec.grid.spacing());
    let c = diffusion * h2_inv;
    let (u, w) = y.split_at(n);
    let (du, dw) = dy.split_at_mut(n);
    for j in 0..n {
        let lf = if j == 0 { j } else { j - 1 };
        let rt = if j == n - 1 { j } else { j + 1 };
        let hill = u[j] * u[j] / (1.0 + k * u[j] * u[j]);
        du[j] = -u[j] - u[j] * w[j] + m1 * hill;
        dw[j] = c * (w[lf] + w[rt] - 2.0 * w[j]) - m3 * w[j] - u[j] * w[j] + m2 * hill;
    }
    check_finite(dy)
}

/// Straight-line scalar kinetics, kept separate from the fused loops so the
/// vectorized path can be cross-checked against it.
pub(super) fn eval_scalar(spec: &ModelSpec, v: f64, w: f64) -> (f64, f64) {
    let [t0, t1] = spec.theta;
    match (spec.kind, &spec.fixed) {
        (ModelKind::Fhn, FixedParams::Fhn { alpha, .. }) => {
            (t1 * (w - alpha * v), -v + t0 * w - w.powi(3))
        }
        (ModelKind::Gm, _) => (-t0 * v + v.powi(2) / w, -t1 * w + v.powi(2)),
        (ModelKind::Bz, _) => (
            t0 - (t1 + 1.0) * v + v.powi(2) * w,
            t1 * v - v.powi(2) * w,
        ),
        _ => panic!("scalar kinetics defined for the reaction-diffusion models only"),
    }
}

pub(super) fn jacobian_bound(spec: &ModelSpec, y: &[f64]) -> Result<KineticsBound, ModelError> {
    let n = spec.grid.node_count();
    if y.len() != 2 * n {
        return Err(ModelError::StateLength { got: y.len(), want: 2 * n });
    }
    let (a, b) = y.split_at(n);
    let [t0, t1] = spec.theta;
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    match (spec.kind, &spec.fixed) {
        (ModelKind::Fhn, FixedParams::Fhn { alpha, .. }) => {
            // f_v = -eps*alpha, f_w = eps; g_v = -1, g_w = mu - 3 w^2
            r1 = (t1 * alpha).abs() + t1.abs();
            for &w in b {
                r2 = r2.max(1.0 + (t0 - 3.0 * w * w).abs());
            }
        }
        (ModelKind::Gm, _) => {
            // f_v = -mu_v + 2v/w, f_w = -v^2/w^2; g_v = 2v, g_w = -mu_w
            for (&v, &w) in a.iter().zip(b) {
                if w <= 0.0 {
                    return Err(ModelError::NumericDomain);
                }
                r1 = r1.max((-t0 + 2.0 * v / w).abs() + (v * v / (w * w)).abs());
                r2 = r2.max(2.0 * v.abs() + t1.abs());
            }
        }
        (ModelKind::Bz, _) => {
            // f_v = -(B+1) + 2vw, f_w = v^2; g_v = B - 2vw, g_w = -v^2
            for (&v, &w) in a.iter().zip(b) {
                let vw2 = 2.0 * v * w;
                r1 = r1.max((-(t1 + 1.0) + vw2).abs() + v * v);
                r2 = r2.max((t1 - vw2).abs() + v * v);
            }
        }
        (ModelKind::Rdode, FixedParams::Rdode { m3, k, .. }) => {
            // f_u = -1 - w + 2 m1 u/(1+k u^2)^2, f_w = -u
            // g_u = -w + 2 m2 u/(1+k u^2)^2,     g_w = -m3 - u
            for (&u, &w) in a.iter().zip(b) {
                let s = 1.0 + k * u * u;
                let hill_d = 2.0 * u / (s * s);
                r1 = r1.max((-1.0 - w + t0 * hill_d).abs() + u.abs());
                r2 = r2.max((-w + t1 * hill_d).abs() + (m3 + u).abs());
            }
        }
        _ => return Err(ModelError::UnsupportedKind(spec.kind)),
    }
    if !(r1.is_finite() && r2.is_finite()) {
        return Err(ModelError::NumericDomain);
    }
    Ok(KineticsBound { first: r1, second: r2 })
}
