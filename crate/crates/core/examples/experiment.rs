//! A small comparison experiment written as CSV, with an SVG plot of median
//! error against the number of samples.

use han_nystrom::bench::{build_source, emit_csv, emit_svg_plot, reference_svd, run_experiment, ExperimentConfig, Method};
use han_nystrom::datasets::{DatasetKind, DatasetSpec};
use han_nystrom::kernel::KernelSpec;

fn main() -> han_nystrom::Result<()> {
    let cfg = ExperimentConfig {
        dataset: DatasetSpec::new(DatasetKind::FemGrid).with_sizes(300, 1500),
        kernel: KernelSpec::LogDist,
        methods: vec![Method::NysB, Method::NysR, Method::HanA],
        sample_sizes: vec![10, 20, 40, 60],
        repeats: 5,
        ..ExperimentConfig::default()
    };
    let rows = run_experiment(&cfg)?;
    let dir = std::env::temp_dir();
    let (csv, svg) = (dir.join("han_experiment.csv"), dir.join("han_experiment.svg"));
    emit_csv(&rows, &csv)?;
    let svd = reference_svd(&build_source(&cfg)?, cfg.oracle_cap)?;
    emit_svg_plot(&rows, svd.as_deref(), &svg)?;
    println!("{} rows -> {}", rows.len(), csv.display());
    println!("plot -> {}", svg.display());
    for r in rows.iter().filter(|r| r.repeat == 0 && r.method != Method::HanA) {
        println!("{:>6} S = {:>3}: rel error {:.2e}", r.method, r.total_samples, r.rel_err_spectral.unwrap_or(f64::NAN));
    }
    Ok(())
}
