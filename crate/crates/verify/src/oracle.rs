//! Reference computations that share no code with the library under test.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
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

/// Adaptive Gauss–Kronrod (7, 15) quadrature of a complex integrand to
/// absolute tolerance `tol`, or to the roundoff floor `1e-14 ∫|f|`.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    let mut stack = vec![(a, b, tol, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let fc = f(c);
        let (mut kron, mut gauss, mut abs) = (fc * WGK[7], fc * WG[3], fc.norm() * WGK[7]);
        for j in 0..7 {
            let (l, r) = (f(c - h * XGK[j]), f(c + h * XGK[j]));
            kron += (l + r) * WGK[j];
            abs += (l.norm() + r.norm()) * WGK[j];
            if j % 2 == 1 {
                gauss += (l + r) * WG[j / 2];
            }
        }
        let err = ((kron - gauss) * h).norm();
        if err <= tol.max(1e-14 * abs * h.abs()) || depth >= 20 {
            total += kron * h;
        } else {
            stack.push((lo, c, 0.5 * tol, depth + 1));
            stack.push((c, hi, 0.5 * tol, depth + 1));
        }
    }
    total
}

/// `∫₀ᵗ sin(α(t-τ)) e^{iβτ} dτ` by quadrature on pieces short enough that
/// the integrand turns by at most 1.5 radians per piece.
pub fn time_integral(alpha: f64, beta: f64, t: f64) -> Complex64 {
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

/// `√(ξ² + ξ⁴)`.
pub fn lambda(xi: f64) -> f64 {
    (xi * xi + xi.powi(4)).sqrt()
}

/// `β` of `(N+1) + (N+1) - 2N`, the only way to reach mode 2 from
/// `{N, N+1, 2N}` with three terms.
pub fn beta_p3_torus(n: u64) -> f64 {
    let n = n as f64;
    lambda(2.0 * n) - 2.0 * lambda(n + 1.0)
}

/// Whether `x` lies in `±([N + 3(p-1)/(2p²), N + 3(p+2)/(2p²)] ∪ [2N, 2N + 3/p²])`
/// up to `tol`.
pub fn in_odd_line_set(p: u32, n: u64, x: f64, tol: f64) -> bool {
    let (p, n) = (p as f64, n as f64);
    let q = p * p;
    let parts = [
        (n + 3.0 * (p - 1.0) / (2.0 * q), n + 3.0 * (p + 2.0) / (2.0 * q)),
        (2.0 * n, 2.0 * n + 3.0 / q),
    ];
    parts
        .iter()
        .any(|&(lo, hi)| x.abs() >= lo - tol && x.abs() <= hi + tol)
}

/// `I_p` for odd `p`, by `p mod 3`.
pub fn odd_window(p: u32) -> (f64, f64) {
    let p = p as f64;
    match p as u32 % 3 {
        0 => (1.0 - 2.0 / p, 1.0 + 2.0 / p),
        1 => (1.0 - 3.0 / p - 4.0 / (p * p), 1.0 - 2.0 / p - 8.0 / (p * p)),
        _ => (1.0 - 4.0 / p + 4.0 / (p * p), 1.0 - 4.0 / (p * p)),
    }
}

/// All `(n₁, n₂, n₃, n₄)` of sum `p` with `n₁ - n₂ + 2(n₃ - n₄) = 0`,
/// `n₁ > n₂`, `n₃ < n₄`, `n₂ + n₃ ≤ 2`, as nested loops.
pub fn class_count_solutions(p: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for n1 in 0..=p {
        for n2 in 0..=p - n1 {
            for n3 in 0..=p - n1 - n2 {
                let n4 = p - n1 - n2 - n3;
                let balanced = n1 as i64 - n2 as i64 + 2 * (n3 as i64 - n4 as i64) == 0;
                if balanced && n1 > n2 && n3 < n4 && n2 + n3 <= 2 {
                    out.push([n1, n2, n3, n4]);
                }
            }
        }
    }
    out.sort();
    out
}
