//! Trace diagnostics: oscillation period, extrema and sup-norm distances.

const YIN_THRESHOLD: f64 = 0.2;

/// Largest |a_i - b_i|; `None` if the lengths differ or are zero.
pub fn sup_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    (a.len() == b.len() && !a.is_empty())
        .then(|| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

pub fn min_value(values: &[f64]) -> Option<f64> {
    values.iter().copied().reduce(f64::min)
}

pub fn max_value(values: &[f64]) -> Option<f64> {
    values.iter().copied().reduce(f64::max)
}

fn uniform_step(times: &[f64]) -> Option<f64> {
    if times.len() < 4 {
        return None;
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
    (dt > 0.0 && uniform).then_some(dt)
}

/// Mean squared difference between the trace and itself shifted by `lag`.
fn difference(values: &[f64], lag: usize) -> f64 {
    let len = values.len() - lag;
    values[..len]
        .iter()
        .zip(&values[lag..])
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / len as f64
}

/// Fundamental period of a uniformly sampled trace, by the cumulative-mean
/// normalised difference function: the first lag whose normalised difference
/// dips below 0.2, refined to its local minimum and then by a parabola
/// through the three neighbouring lags. Lags up to half the window are
/// searched; if nothing dips below the threshold the global minimum is used.
/// Returns `None` for flat or too-short traces and non-uniform grids.
pub fn oscillation_period(times: &[f64], values: &[f64]) -> Option<f64> {
    if times.len() != values.len() {
        return None;
    }
    let dt = uniform_step(times)?;
    let max_lag = values.len() / 2;
    let d: Vec<f64> = (0..=max_lag).map(|lag| difference(values, lag)).collect();
    let mut norm = vec![1.0; d.len()];
    let mut running = 0.0;
    for lag in 1..d.len() {
        running += d[lag];
        norm[lag] = if running > 0.0 {
            d[lag] * lag as f64 / running
        } else {
            1.0
        };
    }
    if running <= 0.0 {
        return None;
    }

    let mut lag = match (2..d.len()).find(|&l| norm[l] < YIN_THRESHOLD) {
        Some(l) => l,
        None => (2..d.len()).min_by(|&a, &b| norm[a].total_cmp(&norm[b]))?,
    };
    while lag + 1 < d.len() && norm[lag + 1] < norm[lag] {
        lag += 1;
    }
    if lag + 1 >= d.len() {
        return Some(lag as f64 * dt);
    }
    let (y0, y1, y2) = (norm[lag - 1], norm[lag], norm[lag + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let shift = if curvature > 0.0 {
        (0.5 * (y0 - y2) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    Some((lag as f64 + shift) * dt)
}

/// 2 pi / period.
pub fn angular_frequency(times: &[f64], values: &[f64]) -> Option<f64> {
    oscillation_period(times, values).map(|p| std::f64::consts::TAU / p)
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn period_of_a_sine() {
        let t = linspace(0.0, 10.0, 2001);
        let v: Vec<f64> = t.iter().map(|x| (2.0 * x).sin()).collect();
        let p = oscillation_period(&t, &v).unwrap();
        assert!((p - PI).abs() < 1e-3, "{p}");
    }

    #[test]
    fn period_of_squared_sine() {
        let t = linspace(0.0, 10.0, 2001);
        let v: Vec<f64> = t
            .iter()
            .map(|x| 0.5 + 0.5 * (1.0 - 0.75 * (2.0 * x).sin().powi(2)).powi(2))
            .collect();
        let p = oscillation_period(&t, &v).unwrap();
        assert!((p - PI / 2.0).abs() / (PI / 2.0) < 1e-3, "{p}");
    }

    #[test]
    fn harmonic_rich_signal_reports_fundamental() {
        let w = 5f64.sqrt();
        let t = linspace(0.0, 10.0, 2001);
        let v: Vec<f64> = t
            .iter()
            .map(|x| {
                let s = (w * x).sin().powi(2);
                1.0 - 0.4 * s + 0.32 * s * s
            })
            .collect();
        let p = oscillation_period(&t, &v).unwrap();
        assert!((p - PI / w).abs() / (PI / w) < 1e-2, "{p}");
    }

    #[test]
    fn flat_and_malformed_inputs() {
        let t = linspace(0.0, 1.0, 50);
        assert_eq!(oscillation_period(&t, &[1.0; 50]), None);
        assert_eq!(oscillation_period(&t[..3], &[0.0, 1.0, 0.0]), None);
        let mut bent = t.clone();
        bent[10] += 0.003;
        let v: Vec<f64> = t.iter().map(|x| (20.0 * x).sin()).collect();
        assert_eq!(oscillation_period(&bent, &v), None);
    }

    #[test]
    fn distances_and_extrema() {
        assert_eq!(sup_distance(&[1.0, 2.0], &[1.5, 1.0]), Some(1.0));
        assert_eq!(sup_distance(&[1.0], &[]), None);
        assert_eq!(min_value(&[3.0, -1.0, 2.0]), Some(-1.0));
        assert_eq!(max_value(&[]), None);
        let g = linspace(0.2, 2.0, 181);
        assert_eq!(g.len(), 181);
        assert_eq!(g[180], 2.0);
        assert!((g[1] - 0.21).abs() < 1e-15);
    }
}
