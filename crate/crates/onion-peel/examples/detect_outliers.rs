//! Run top-k outlier detection with the Mahalanobis metric and compare the
//! ranked picks against the planted ground truth.
//!
//! Run with: `cargo run --example detect_outliers`

use onion_peel::{detect, generate, recall, DetectionConfig, GenSpec, MetricKind};

fn main() -> onion_peel::Result<()> {
    let spec = GenSpec::benchmark_default(42);
    let dataset = generate(&spec)?;

    let config = DetectionConfig::new(15).with_metric(MetricKind::Mahalanobis);
    let report = detect(&dataset.points, &config)?;

    println!(
        "{:>4} {:>8} {:>14} {:>14}",
        "rank", "id", "score", "hull area"
    );
    for (rank, ((&id, &score), &volume)) in report
        .outlier_ids
        .iter()
        .zip(&report.scores)
        .zip(&report.volumes)
        .enumerate()
    {
        println!("{:>4} {:>8} {:>14.3} {:>14.3}", rank + 1, id, score, volume);
    }
    println!("early termination: {}", report.early_termination);

    let hit_rate = recall(&report, &dataset.truth_outlier_ids)?;
    println!(
        "recovered {:.0}% of the {} planted outliers",
        100.0 * hit_rate,
        dataset.truth_outlier_ids.len()
    );
    Ok(())
}
