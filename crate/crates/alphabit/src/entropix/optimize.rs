//! Derivative-free 1-D and n-D maximisers used by the capacity search.

/// Golden-section maximisation of a unimodal function on [a, b], refined
/// until the bracket is narrower than `tol`. Returns (argmax, max).
pub fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618033988749894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Nelder–Mead simplex ascent of `f` from `start`, with initial simplex
/// scale `scale`. Stops when the best value has improved by less than
/// `stall_tol` over the last `stall_iters` iterations, or at `max_iters`.
/// Returns (best point, best value, stalled-out flag).
pub fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    scale: f64,
    max_iters: usize,
    stall_iters: usize,
    stall_tol: f64,
) -> (Vec<f64>, f64, bool) {
    let n = start.len();
    if n == 0 {
        let v = f(start);
        return (start.to_vec(), v, true);
    }
    // Internally minimise -f.
    let g = |x: &[f64]| -f(x);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += scale;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| g(p)).collect();

    let mut best_so_far = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut window_best = best_so_far;
    let mut window_start = 0usize;
    let mut converged = false;

    for iter in 0..max_iters {
        // Order ascending by g.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let reorder: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reorder;
        values = revalues;

        best_so_far = best_so_far.min(values[0]);
        if iter - window_start >= stall_iters {
            if window_best - best_so_far < stall_tol {
                converged = true;
                break;
            }
            window_best = best_so_far;
            window_start = iter;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|k| centroid[k] + (centroid[k] - worst[k])).collect();
        let f_reflect = g(&reflect);

        if f_reflect < values[0] {
            // Try expanding.
            let expand: Vec<f64> = (0..n)
                .map(|k| centroid[k] + 2.0 * (centroid[k] - worst[k]))
                .collect();
            let f_expand = g(&expand);
            if f_expand < f_reflect {
                simplex[n] = expand;
                values[n] = f_expand;
            } else {
                simplex[n] = reflect;
                values[n] = f_reflect;
            }
        } else if f_reflect < values[n - 1] {
            simplex[n] = reflect;
            values[n] = f_reflect;
        } else {
            let contract: Vec<f64> = if f_reflect < values[n] {
                (0..n).map(|k| centroid[k] + 0.5 * (reflect[k] - centroid[k])).collect()
            } else {
                (0..n).map(|k| centroid[k] + 0.5 * (worst[k] - centroid[k])).collect()
            };
            let f_contract = g(&contract);
            if f_contract < values[n].min(f_reflect) {
                simplex[n] = contract;
                values[n] = f_contract;
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].clone();
                for i in 1..=n {
                    for k in 0..n {
                        simplex[i][k] = best[k] + 0.5 * (simplex[i][k] - best[k]);
                    }
                    values[i] = g(&simplex[i]);
                }
            }
        }
    }

    let mut best_idx = 0;
    for i in 1..=n {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    (simplex[best_idx].clone(), -values[best_idx], converged)
}
