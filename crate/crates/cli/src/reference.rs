//! Reference amplitudes and Euler-angle cosines in closed form.

/// Four-spin ferromagnetic chain amplitudes after `R₁`, `S₁₂`, `S₂₃`, `S₃₄`,
/// one column per stage, rows `|−−−−⟩ … |++++⟩` with `s_1` as the leftmost label.
pub fn four_spin_chain_columns(j: f64, beta: f64) -> [[f64; 16]; 4] {
    let x = (beta / 2.0).exp();
    let c = 2.0 * (beta * j).cosh();
    let xj = |k: f64| x.powf(k * j);
    let r2 = 2f64.sqrt();
    let mut cols = [[0.0; 16]; 4];
    cols[0][0] = 1.0 / r2;
    cols[0][8] = 1.0 / r2;
    let d = (2.0 * c).sqrt();
    for (row, a) in [(0, xj(1.0)), (4, -xj(-1.0)), (8, xj(-1.0)), (12, -xj(1.0))] {
        cols[1][row] = a / d;
    }
    let d = r2 * c;
    for (row, a) in [
        (0, xj(2.0)),
        (2, -1.0),
        (4, -xj(-2.0)),
        (6, 1.0),
        (8, 1.0),
        (10, -xj(-2.0)),
        (12, -1.0),
        (14, xj(2.0)),
    ] {
        cols[2][row] = a / d;
    }
    let d = r2 * c.powf(1.5);
    let last = [
        xj(3.0),
        -xj(1.0),
        -xj(-1.0),
        xj(1.0),
        -xj(-1.0),
        xj(-3.0),
        xj(-1.0),
        -xj(1.0),
        xj(1.0),
        -xj(-1.0),
        -xj(-3.0),
        xj(-1.0),
        -xj(1.0),
        xj(-1.0),
        xj(1.0),
        -xj(3.0),
    ];
    for (row, a) in last.iter().enumerate() {
        cols[3][row] = a / d;
    }
    cols
}

/// Register index of a four-spin row whose leftmost label is spin 1.
pub fn row_index(row: usize) -> usize {
    (0..4).fold(0, |acc, k| acc | (((row >> (3 - k)) & 1) << k))
}

fn f(x: f64, j: f64, k: f64, l: f64, m: f64) -> f64 {
    x.powf(4.0 * j * k) / (l + m * x.powf(8.0 * j)).sqrt()
}

fn h(x: f64, j: f64, k: f64, l: f64, m: f64, n: f64) -> f64 {
    x.powf(4.0 * j * k) / (l + m * x.powf(8.0 * j) + n * x.powf(16.0 * j)).sqrt()
}

/// Ferromagnetic three-spin loop: `(k, cos θ_k)` and `cos θ_8` of the `−` construction.
///
/// `θ_13` is `f_{1,3,1}`.
pub fn three_spin_cosines(j: f64, beta: f64) -> (Vec<(usize, f64)>, f64) {
    let x = (beta / 2.0).exp();
    let f = |k, l, m| f(x, j, k, l, m);
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    let cos = vec![
        (1, 1.0 / r2),
        (2, -1.0 / r3),
        (3, -f(0.0, 1.0, 3.0)),
        (4, f(1.0, 1.0, 4.0)),
        (5, f(1.0, 1.0, 5.0)),
        (6, -f(1.0, 1.0, 6.0)),
        (7, -f(0.0, 2.0, 6.0)),
        (9, f(1.0, 6.0, 2.0)),
        (10, f(0.0, 6.0, 1.0)),
        (11, -f(0.0, 5.0, 1.0)),
        (12, -f(0.0, 4.0, 1.0)),
        (13, f(1.0, 3.0, 1.0)),
        (14, 1.0 / r3),
        (15, -1.0 / r2),
    ];
    let c8 = 1.0 / (f(0.0, 1.0, 3.0) * (1.0 + x.powf(4.0 * j)).powf(1.5));
    (cos, c8)
}

/// Ferromagnetic four-spin loop: `(k, cos θ_k)` and `sin θ_16` of the `−` construction.
pub fn four_spin_cosines(j: f64, beta: f64) -> (Vec<(usize, f64)>, f64) {
    let x = (beta / 2.0).exp();
    let h = |k, l, m, n| h(x, j, k, l, m, n);
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    let cos = vec![
        (1, 1.0 / r2),
        (2, -1.0 / r3),
        (3, -h(0.0, 1.0, 3.0, 0.0)),
        (4, h(1.0, 1.0, 4.0, 0.0)),
        (5, h(0.0, 2.0, 4.0, 0.0)),
        (6, -h(0.0, 3.0, 4.0, 0.0)),
        (7, -h(0.0, 4.0, 4.0, 0.0)),
        (8, -h(1.0, 4.0, 5.0, 0.0)),
        (9, -h(1.0, 4.0, 6.0, 0.0)),
        (10, h(1.0, 4.0, 7.0, 0.0)),
        (11, h(0.0, 5.0, 7.0, 0.0)),
        (12, -h(1.0, 5.0, 8.0, 0.0)),
        (13, -h(0.0, 6.0, 8.0, 0.0)),
        (14, h(0.0, 7.0, 8.0, 0.0)),
        (15, h(0.0, 8.0, 8.0, 0.0)),
        (17, -h(2.0, 2.0, 12.0, 2.0)),
        (18, -h(1.0, 2.0, 12.0, 1.0)),
        (19, h(1.0, 2.0, 11.0, 1.0)),
        (20, h(1.0, 2.0, 10.0, 1.0)),
        (21, -h(1.0, 2.0, 9.0, 1.0)),
        (22, -h(1.0, 2.0, 8.0, 1.0)),
        (23, h(1.0, 2.0, 7.0, 1.0)),
        (24, h(0.0, 2.0, 6.0, 1.0)),
        (25, h(2.0, 1.0, 6.0, 1.0)),
        (26, h(1.0, 1.0, 6.0, 0.0)),
        (27, -h(1.0, 1.0, 5.0, 0.0)),
        (28, -h(1.0, 1.0, 4.0, 0.0)),
        (29, h(1.0, 1.0, 3.0, 0.0)),
        (30, h(1.0, 1.0, 2.0, 0.0)),
        (31, -h(1.0, 1.0, 1.0, 0.0)),
    ];
    let s16 = 1.0 / (h(0.0, 1.0, 6.0, 1.0) * (1.0 + x.powf(4.0 * j)).powi(2));
    (cos, s16)
}
