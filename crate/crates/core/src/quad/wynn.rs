/// Extrapolated limit of a sequence and the spread of the two best
/// neighbouring estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WynnEstimate {
    pub value: f64,
    pub err: f64,
}

/// Wynn's epsilon algorithm applied to `s`.
///
/// Every even column of the table is a candidate; the column whose last
/// entry moved least from the previous even column wins.
pub fn wynn_epsilon(s: &[f64]) -> WynnEstimate {
    let n = s.len();
    if n == 0 {
        return WynnEstimate { value: 0.0, err: f64::INFINITY };
    }
    if n < 3 {
        let err = if n == 2 { (s[1] - s[0]).abs() } else { f64::INFINITY };
        return WynnEstimate { value: s[n - 1], err };
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur = s.to_vec();
    let mut last_even = s[n - 1];
    let mut best = WynnEstimate { value: s[n - 1], err: (s[n - 1] - s[n - 2]).abs() };
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broken = false;
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            let v = prev[j + 1] + 1.0 / diff;
            if diff == 0.0 || !v.is_finite() {
                broken = true;
                break;
            }
            next.push(v);
        }
        if broken {
            if k % 2 == 0 && cur[cur.len() - 1] == cur[cur.len() - 2] {
                // an even column has become constant
                return WynnEstimate { value: cur[cur.len() - 1], err: 0.0 };
            }
            break;
        }
        k += 1;
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            let v = cur[cur.len() - 1];
            let err = (v - last_even).abs();
            if err <= best.err {
                best = WynnEstimate { value: v, err };
            }
            last_even = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_harmonic_series() {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 1..=20 {
            acc += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            s.push(acc);
        }
        let e = wynn_epsilon(&s);
        assert!((e.value - 2f64.ln()).abs() < 1e-13, "{e:?}");
        assert!((s[19] - 2f64.ln()).abs() > 1e-2);
    }

    #[test]
    fn geometric_sequence_is_exact() {
        let s: Vec<f64> = (0..8).map(|k| 3.0 + 0.5f64.powi(k)).collect();
        let e = wynn_epsilon(&s);
        assert!((e.value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn constant_sequence() {
        let e = wynn_epsilon(&[1.5; 6]);
        assert_eq!(e.value, 1.5);
        assert_eq!(e.err, 0.0);
    }
}
