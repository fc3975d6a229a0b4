//! Fixed-step Dormand–Prince 5(4).

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights; equal to the last row of `A` (first same as last).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Summary of a completed integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5Stats {
    pub steps: usize,
    /// Largest max-norm difference between the 5th- and 4th-order solutions
    /// over all steps. Reported only; it does not change the step size.
    pub max_error_estimate: f64,
}

/// Integrates `y' = rhs(t, y)` from 0 to `t_final` with constant step `dt`
/// (the last step is shortened to land on `t_final`).
///
/// `sync` runs on every stage state before `rhs` sees it, and `observe` is
/// called with `(step, t, y)` for the initial state and after every step.
pub fn dopri5_integrate<F, S, O>(
    initial: &[f64],
    dt: f64,
    t_final: f64,
    mut rhs: F,
    mut sync: S,
    mut observe: O,
) -> Result<(Vec<f64>, Dopri5Stats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    S: FnMut(&mut [f64]),
    O: FnMut(usize, f64, &[f64]),
{
    if !(dt > 0.0 && dt.is_finite()) || !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need dt > 0 and t_final >= 0, got dt = {dt}, t_final = {t_final}"
        )));
    }
    let n = initial.len();
    let mut y = initial.to_vec();
    sync(&mut y);
    observe(0, 0.0, &y);
    let steps = if t_final == 0.0 {
        0
    } else {
        // Tolerate round-off in t_final / dt before adding a short last step.
        let ratio = t_final / dt;
        let whole = ratio.round();
        if (ratio - whole).abs() <= 1e-9 * ratio.max(1.0) {
            whole as usize
        } else {
            ratio.ceil() as usize
        }
    };

    let mut k = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut have_first = false;
    let mut max_error_estimate = 0.0f64;
    for step in 0..steps {
        let t = step as f64 * dt;
        let h = if step + 1 == steps { t_final - t } else { dt };
        if !have_first {
            rhs(t, &y, &mut k[0]);
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, a) in A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += a * k[j][i];
                    }
                }
                stage[i] = y[i] + h * acc;
            }
            sync(&mut stage);
            rhs(t + C[s] * h, &stage, &mut k[s]);
        }
        // The seventh stage state is the fifth-order solution.
        let err = (0..n)
            .map(|i| (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>())
            .fold(0.0f64, |m, e| m.max((h * e).abs()));
        max_error_estimate = max_error_estimate.max(err);
        std::mem::swap(&mut y, &mut stage);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { step: step + 1 });
        }
        k.swap(0, 6);
        have_first = true;
        observe(step + 1, t + h, &y);
    }
    Ok((
        y,
        Dopri5Stats {
            steps,
            max_error_estimate,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(lambda: f64, dt: f64, t: f64) -> f64 {
        let (y, _) = dopri5_integrate(
            &[1.0],
            dt,
            t,
            |_, y, out| out[0] = lambda * y[0],
            |_| {},
            |_, _, _| {},
        )
        .unwrap();
        y[0]
    }

    #[test]
    fn zero_rhs_is_identity() {
        let y0 = vec![0.1, -3.0, 7.25e-3];
        let (y, stats) = dopri5_integrate(
            &y0,
            0.01,
            0.5,
            |_, _, out| out.fill(0.0),
            |_| {},
            |_, _, _| {},
        )
        .unwrap();
        assert_eq!(y, y0);
        assert_eq!(stats.steps, 50);
    }

    #[test]
    fn exponential_decay() {
        assert!((decay(-1.0, 0.1, 1.0) - (-1.0f64).exp()).abs() <= 1e-7);
    }

    #[test]
    fn fifth_order_step_halving() {
        let mut ratios = Vec::new();
        for lambda in [-1.0, -2.0] {
            let exact = (lambda * 1.0f64).exp();
            let e1 = (decay(lambda, 0.1, 1.0) - exact).abs();
            let e2 = (decay(lambda, 0.05, 1.0) - exact).abs();
            ratios.push(e1 / e2);
        }
        let mean = ratios.iter().sum::<f64>() / 2.0;
        assert!(mean >= 2f64.powf(4.5), "{ratios:?}");
    }

    #[test]
    fn short_last_step_and_observer() {
        let mut times = Vec::new();
        let (y, stats) = dopri5_integrate(
            &[1.0],
            0.3,
            1.0,
            |_, _, out| out[0] = 1.0,
            |_| {},
            |_, t, _| times.push(t),
        )
        .unwrap();
        assert_eq!(stats.steps, 4);
        assert!((y[0] - 2.0).abs() < 1e-14);
        assert!((times.last().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(times.len(), 5);
    }

    #[test]
    fn sync_runs_on_every_stage() {
        let mut calls = 0;
        dopri5_integrate(
            &[1.0, 2.0],
            0.1,
            0.3,
            |_, y, out| out.copy_from_slice(y),
            |_| calls += 1,
            |_, _, _| {},
        )
        .unwrap();
        assert_eq!(calls, 1 + 3 * 6);
    }

    #[test]
    fn blow_up_is_reported() {
        let r = dopri5_integrate(
            &[1.0],
            1.0,
            500.0,
            |_, y, out| out[0] = y[0] * y[0],
            |_| {},
            |_, _, _| {},
        );
        assert!(matches!(r, Err(Error::BlowUp { .. })));
    }
}
