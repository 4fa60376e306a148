//! Reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod estimate, `|K15 - G7|`, and the Kronrod estimate of `∫|f|`.
fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (l, r) = (f(c - x), f(c + x));
        kron += (l + r) * WGK[j];
        abs += (l.norm() + r.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (l + r) * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm(), abs * h.abs())
}

/// Adaptive Gauss–Kronrod (7, 15) quadrature of a complex integrand.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, abs_tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let mut stack = vec![(a, b, abs_tol, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let (v, err, abs) = gk15(&f, lo, hi);
        // |K15 - G7| overestimates the K15 error; stop at the roundoff floor.
        if err <= tol.max(1e-14 * abs) || depth >= 20 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol, depth + 1));
            stack.push((mid, hi, 0.5 * tol, depth + 1));
        }
    }
    total
}

/// `∫₀ᵗ sin(α(t-τ)) e^{iβτ} dτ` by quadrature, split into pieces of at most
/// a quarter period of the fastest oscillation.
pub fn time_integral_oracle(alpha: f64, beta: f64, t: f64) -> Complex64 {
    let rate = alpha.abs() + beta.abs() + 1.0;
    let pieces = ((t * rate / 1.5).ceil() as usize).max(1);
    let h = t / pieces as f64;
    (0..pieces)
        .map(|i| {
            integrate(
                |tau| Complex64::from_polar((alpha * (t - tau)).sin(), beta * tau),
                i as f64 * h,
                (i + 1) as f64 * h,
                1e-15 * h,
            )
        })
        .sum()
}

pub fn lambda(xi: f64) -> f64 {
    (xi * xi + xi.powi(4)).sqrt()
}
