//! Published reference values for the six simulation tables.

/// Tail probabilities reported for the CLT tables.
pub const CLT_PROBS: [f64; 6] = [0.025, 0.05, 0.1, 0.9, 0.95, 0.975];

/// Nominal levels reported for the bootstrap tables.
pub const TEST_LEVELS: [f64; 5] = [0.01, 0.025, 0.05, 0.1, 0.2];

pub const N_LIST: [usize; 5] = [2500, 10_000, 22_500, 40_000, 52_900];

/// Replications behind the CLT tables and the bootstrap tables.
pub const CLT_REPS: usize = 10_000;
pub const TEST_RUNS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltRow {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub coverage: [f64; 6],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionRow {
    pub n: usize,
    pub rates: [f64; 5],
}

const fn clt(n: usize, mean: f64, variance: f64, coverage: [f64; 6]) -> CltRow {
    CltRow {
        n,
        mean,
        variance,
        coverage,
    }
}

const fn rej(n: usize, rates: [f64; 5]) -> RejectionRow {
    RejectionRow { n, rates }
}

/// Infeasible statistic, rho = 0.
pub const TABLE1: [CltRow; 5] = [
    clt(2500, -0.129, 0.901, [0.0098, 0.0345, 0.0961, 0.9215, 0.9561, 0.9721]),
    clt(10_000, -0.040, 1.020, [0.0152, 0.0395, 0.0992, 0.8974, 0.9426, 0.9665]),
    clt(22_500, -0.005, 0.994, [0.0180, 0.0405, 0.0906, 0.8993, 0.9424, 0.9678]),
    clt(40_000, 0.024, 1.029, [0.0184, 0.0428, 0.0952, 0.8918, 0.9446, 0.9692]),
    clt(52_900, 0.061, 1.033, [0.0193, 0.0399, 0.0911, 0.8878, 0.9380, 0.9672]),
];

/// Infeasible statistic with leverage.
pub const TABLE2: [CltRow; 5] = [
    clt(2500, -0.132, 0.931, [0.0115, 0.0358, 0.0984, 0.9195, 0.9527, 0.9724]),
    clt(10_000, -0.048, 1.008, [0.0153, 0.0400, 0.0950, 0.9022, 0.9457, 0.9677]),
    clt(22_500, -0.126, 0.928, [0.0206, 0.0463, 0.1085, 0.9221, 0.9579, 0.9793]),
    clt(40_000, 0.021, 0.995, [0.0193, 0.0423, 0.0945, 0.8959, 0.9457, 0.9717]),
    clt(52_900, 0.051, 1.027, [0.0187, 0.0434, 0.0950, 0.8907, 0.9407, 0.9675]),
];

/// Feasible statistic, rho = 0.
pub const TABLE3: [CltRow; 5] = [
    clt(2500, -0.287, 0.965, [0.0526, 0.0932, 0.1619, 0.9572, 0.9862, 0.9965]),
    clt(10_000, -0.170, 1.023, [0.0449, 0.0799, 0.1425, 0.9325, 0.9757, 0.9928]),
    clt(22_500, -0.112, 1.002, [0.0404, 0.0696, 0.1253, 0.9271, 0.9722, 0.9914]),
    clt(40_000, -0.073, 1.029, [0.0401, 0.0703, 0.1235, 0.9203, 0.9690, 0.9874]),
    clt(52_900, -0.031, 1.022, [0.0368, 0.0653, 0.1157, 0.9154, 0.9633, 0.9872]),
];

/// Feasible statistic, rho = -0.2.
pub const TABLE4: [CltRow; 5] = [
    clt(2500, -0.295, 0.971, [0.0552, 0.0963, 0.1614, 0.9559, 0.9864, 0.9962]),
    clt(10_000, -0.176, 1.013, [0.0464, 0.0808, 0.1427, 0.9369, 0.9770, 0.9940]),
    clt(22_500, -0.226, 0.987, [0.0480, 0.0840, 0.1476, 0.9436, 0.9776, 0.9932]),
    clt(40_000, -0.075, 1.001, [0.0410, 0.0673, 0.1217, 0.9254, 0.9713, 0.9904]),
    clt(52_900, -0.040, 1.019, [0.0396, 0.0677, 0.1171, 0.9180, 0.9663, 0.9879]),
];

/// Bootstrap level under the Heston null.
pub const TABLE5: [RejectionRow; 5] = [
    rej(2500, [0.018, 0.040, 0.064, 0.120, 0.216]),
    rej(10_000, [0.010, 0.018, 0.040, 0.084, 0.194]),
    rej(22_500, [0.016, 0.024, 0.034, 0.088, 0.194]),
    rej(40_000, [0.020, 0.038, 0.068, 0.128, 0.220]),
    rej(52_900, [0.010, 0.020, 0.052, 0.118, 0.200]),
];

/// Power against the gamma = 0 (Vasicek-type) alternative.
pub const TABLE6_GAMMA0: [RejectionRow; 5] = [
    rej(2500, [0.028, 0.052, 0.082, 0.134, 0.262]),
    rej(10_000, [0.032, 0.048, 0.086, 0.138, 0.260]),
    rej(22_500, [0.024, 0.042, 0.068, 0.138, 0.302]),
    rej(40_000, [0.028, 0.046, 0.094, 0.196, 0.426]),
    rej(52_900, [0.026, 0.040, 0.082, 0.174, 0.422]),
];

/// Power against the gamma = 1 alternative.
pub const TABLE6_GAMMA1: [RejectionRow; 5] = [
    rej(2500, [0.044, 0.090, 0.156, 0.248, 0.372]),
    rej(10_000, [0.036, 0.084, 0.176, 0.284, 0.396]),
    rej(22_500, [0.032, 0.086, 0.162, 0.284, 0.432]),
    rej(40_000, [0.028, 0.064, 0.120, 0.310, 0.482]),
    rej(52_900, [0.024, 0.058, 0.144, 0.320, 0.488]),
];

pub fn clt_row(table: &[CltRow], n: usize) -> Option<&CltRow> {
    table.iter().find(|r| r.n == n)
}

pub fn rejection_row(table: &[RejectionRow], n: usize) -> Option<&RejectionRow> {
    table.iter().find(|r| r.n == n)
}
