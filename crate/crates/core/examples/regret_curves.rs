//! The four regret experiments (two undirected, two directed; fixed and
//! Erdős–Rényi graphs), written as CSV for plotting.
//!
//! cargo run --release --example regret_curves -- [out_dir] [trials]

use std::path::PathBuf;

use graphbandit::cli;
use graphbandit::verify::figure_settings;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "regret-curves".into()));
    let trials = args.next().unwrap_or_else(|| "1000".into());
    for (setting, graph) in figure_settings() {
        let out = dir.join(format!("{setting}.csv"));
        let code = cli::run([
            "graphbandit",
            "simulate",
            "--policy",
            "ts-n,ts-u,ucb-n",
            "--schedule",
            "inv-t",
            "--graph",
            &graph.to_string(),
            "--arms",
            "5",
            "--horizon",
            "1000",
            "--trials",
            &trials,
            "--seed",
            "1",
            "--out",
            out.to_str().expect("utf-8 path"),
        ]);
        assert_eq!(code, 0, "simulate failed for {setting}");
        let text = std::fs::read_to_string(&out).expect("csv written");
        let finals: Vec<String> = text
            .lines()
            .filter(|l| l.contains(",1000,"))
            .map(|l| {
                let policy = l.split(',').next().unwrap_or_default();
                let mean: f64 = l
                    .rsplit(',')
                    .nth(2)
                    .and_then(|m| m.parse().ok())
                    .unwrap_or(f64::NAN);
                format!("{policy} {mean:.2}")
            })
            .collect();
        println!("{setting:<22} {} ({})", out.display(), finals.join(", "));
    }
}
