//! Small numeric helpers shared across modules.

/// `ceil(n * x)` with a guard against f64 representation noise
/// (e.g. `1000 * 0.2` evaluating to `200.00000000000003`).
pub(crate) fn ceil_frac(n: usize, x: f64) -> usize {
    ((n as f64) * x - 1e-9).ceil().max(0.0) as usize
}

/// `floor(n * x)` with the same guard (e.g. `100 * 0.29` evaluating to
/// `28.999999999999996`).
pub(crate) fn floor_frac(n: usize, x: f64) -> usize {
    ((n as f64) * x + 1e-9).floor().max(0.0) as usize
}

/// `ceil(x)` for a positive quantity, guarded like `ceil_frac`.
pub(crate) fn ceil_val(x: f64) -> u64 {
    (x - 1e-9).ceil().max(0.0) as u64
}
