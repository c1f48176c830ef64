//! Shared numeric helpers: Japanese bracket, factorials, integer snapping,
//! Gauss-Legendre rules and adaptive Gauss-Kronrod integration.

use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

/// `(1 + |t|^2)^{1/2}` with `|t|` the Euclidean norm.
pub fn japanese_bracket(t: &[f64]) -> f64 {
    let sq: f64 = t.iter().map(|v| v * v).sum();
    (1.0 + sq).sqrt()
}

/// Scalar form of [`japanese_bracket`].
pub fn japanese_bracket_scalar(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// `n!` as a float; exact for `n <= 20`, log-domain beyond.
pub fn factorial(n: u32) -> f64 {
    if n <= 20 {
        (1..=n as u64).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: u32) -> f64 {
    if n <= 20 {
        ((1..=n as u64).product::<u64>() as f64).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Snaps `x` to the nearest integer when within `1e-12` (relative to
/// `max(1, |x|)`), then takes the ceiling.
pub fn snap_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// Converts a non-negative float to an integer count, saturating at
/// `u64::MAX`. Returns `(value, saturated)`.
pub fn to_count(x: f64) -> (u64, bool) {
    if !x.is_finite() || x >= u64::MAX as f64 {
        (u64::MAX, true)
    } else if x <= 0.0 {
        (0, false)
    } else {
        (x as u64, false)
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Cached rule with `n` nodes.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().unwrap().get(&n) {
            return rule.clone();
        }
        let rule = Arc::new(Self::compute(n));
        cache.lock().unwrap().insert(n, rule.clone());
        rule
    }

    fn compute(n: usize) -> GaussLegendre {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let x = self.nodes.iter().map(|t| mid + half * t).collect();
        let w = self.weights.iter().map(|w| w * half).collect();
        (x, w)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product Gauss-Legendre rule over a box, nodes stored row-major
/// (last axis fastest).
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl TensorRule {
    pub fn new(lower: &[f64], upper: &[f64], nodes_per_axis: &[usize]) -> TensorRule {
        let dim = lower.len();
        let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..dim)
            .map(|j| GaussLegendre::get(nodes_per_axis[j]).on_interval(lower[j], upper[j]))
            .collect();
        let total: usize = nodes_per_axis.iter().product();
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            let mut p = Vec::with_capacity(dim);
            for j in 0..dim {
                p.push(axes[j].0[idx[j]]);
                w *= axes[j].1[idx[j]];
            }
            points.push(p);
            weights.push(w);
            for j in (0..dim).rev() {
                idx[j] += 1;
                if idx[j] < nodes_per_axis[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        TensorRule { dim, points, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive 15-point Gauss-Kronrod integration over `[a, b]`.
/// Returns `(value, error_estimate)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> (f64, f64) {
    const MAX_SEGMENTS: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_SEGMENTS {
        let seg = heap.pop().unwrap();
        let m = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&f, seg.a, m);
        let (v2, e2) = gk15(&f, m, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment { a: seg.a, b: m, value: v1, err: e1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, err: e2 });
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum();
    let err = segs.iter().map(|s| s.err).sum();
    (value, err)
}

/// Ordinary least squares for `y = intercept + slope * x`.
/// Returns `(intercept, slope, r_squared)`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    (intercept, slope, r2)
}

/// Pairwise summation in a fixed order, so parallel maps followed by this
/// reduction stay bit-reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
