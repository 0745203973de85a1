//! Small dense-vector helpers shared by retrieval and evaluation code.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l2_norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine similarity. Returns -1.0 when either vector has zero norm, so that
/// degenerate vectors sort behind every real candidate.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = l2_norm(a);
    let nb = l2_norm(b);
    if na == 0.0 || nb == 0.0 {
        return -1.0;
    }
    dot(a, b) / (na * nb)
}

/// Cosine against a vector whose norm is already known (full-scan retrieval
/// precomputes target norms once).
pub fn cosine_with_norm(a: &[f64], a_norm: f64, b: &[f64], b_norm: f64) -> f64 {
    if a_norm == 0.0 || b_norm == 0.0 {
        return -1.0;
    }
    dot(a, b) / (a_norm * b_norm)
}
