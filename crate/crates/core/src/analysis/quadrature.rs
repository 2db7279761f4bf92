//! Adaptive Gauss–Kronrod (7/15) integration of vector-valued integrands.

use crate::{Error, Result};

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
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

/// Integrates `f` componentwise over `[a, b]` to absolute tolerance `tol`.
///
/// `f(x, out)` writes `dim` values. The domain is first split into
/// `initial_pieces` equal intervals; each is bisected until the Kronrod–Gauss
/// difference of every component fits its share of `tol`.
pub fn integrate<F>(
    f: &F,
    dim: usize,
    a: f64,
    b: f64,
    tol: f64,
    initial_pieces: usize,
) -> Result<Vec<f64>>
where
    F: Fn(f64, &mut [f64]),
{
    let pieces = initial_pieces.max(1);
    let width = (b - a) / pieces as f64;
    let breaks: Vec<f64> = (0..=pieces)
        .map(|p| if p == pieces { b } else { a + width * p as f64 })
        .collect();
    integrate_between(f, dim, &breaks, tol)
}

/// Like [`integrate`], over consecutive pairs of sorted `breaks`. Placing
/// breakpoints around narrow features keeps them from being stepped over.
pub fn integrate_between<F>(f: &F, dim: usize, breaks: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &mut [f64]),
{
    let mut total = vec![0.0; dim];
    let mut scratch = Scratch::new(dim);
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            adapt(f, w[0], w[1], tol / pieces, 0, &mut scratch, &mut total)?;
        }
    }
    Ok(total)
}

struct Scratch {
    fx: Vec<f64>,
    kronrod: Vec<f64>,
    gauss: Vec<f64>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Self {
            fx: vec![0.0; dim],
            kronrod: vec![0.0; dim],
            gauss: vec![0.0; dim],
        }
    }
}

fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    s: &mut Scratch,
    total: &mut [f64],
) -> Result<()>
where
    F: Fn(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    s.kronrod.fill(0.0);
    s.gauss.fill(0.0);
    for (i, (&x, &wk)) in XGK.iter().zip(&WGK).enumerate() {
        let nodes: &[f64] = if x == 0.0 {
            &[center]
        } else {
            &[center - half * x, center + half * x]
        };
        for &node in nodes {
            f(node, &mut s.fx);
            for d in 0..s.fx.len() {
                s.kronrod[d] += wk * s.fx[d];
                if i % 2 == 1 {
                    s.gauss[d] += WG[i / 2] * s.fx[d];
                }
            }
        }
    }
    let err = s
        .kronrod
        .iter()
        .zip(&s.gauss)
        .map(|(k, g)| (half * (k - g)).abs())
        .fold(0.0, f64::max);
    if !err.is_finite() {
        return Err(Error::Numeric(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    if err <= tol {
        for (t, k) in total.iter_mut().zip(&s.kronrod) {
            *t += half * k;
        }
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}]: error estimate {err:e} > {tol:e}"
        )));
    }
    adapt(f, a, center, 0.5 * tol, depth + 1, s, total)?;
    adapt(f, center, b, 0.5 * tol, depth + 1, s, total)
}
