//! Runs a small sweep from a config file and prints the CSV plus trend
//! statistics. Pass a config path to run something else.

use cdc_route::experiment::{fit_exponent, kendall_tau, run_experiment, spearman, ExperimentConfig};

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable config"),
        None => include_str!("data/sweep.exp").to_string(),
    };
    let cfg = ExperimentConfig::parse(&text).expect("valid config");
    let result = run_experiment(&cfg).expect("experiment runs");
    print!("{}", result.to_csv());

    let n: Vec<f64> = result.means.iter().map(|m| m.n as f64).collect();
    let msg: Vec<f64> = result.means.iter().map(|m| m.msg_ratio).collect();
    let rows_msg: Vec<f64> = result.rows.iter().map(|r| r.msg_ratio).collect();
    let rows_blossom: Vec<f64> = result.rows.iter().map(|r| r.blossom_ratio).collect();
    let n_exp: Vec<f64> = result.rows.iter().map(|r| r.n_exp as f64).collect();
    let total: Vec<f64> = result.rows.iter().map(|r| r.messages_total as f64).collect();
    eprintln!("kendall tau(n, msg_ratio)         {:.3}", kendall_tau(&n, &msg));
    eprintln!("spearman(blossom, msg) per trial  {:.3}", spearman(&rows_blossom, &rows_msg));
    eprintln!("messages ~ n_exp^{:.3}", fit_exponent(&n_exp, &total));
    eprintln!("discrepancies {}", result.discrepancies.len());
}
