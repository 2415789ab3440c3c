//! Render a scatter plot of a dataset with detected outliers marked and the
//! convex-layer rings overlaid, as a dependency-free SVG.
//!
//! Run with: `cargo run --example plot_svg`

use std::fs;
use std::path::PathBuf;

use onion_peel::svg::{scatter_svg, SvgOptions};
use onion_peel::{detect, generate, onion_peel, DetectionConfig, GenSpec, MetricKind, Point2};

fn main() -> onion_peel::Result<()> {
    let spec = GenSpec {
        n: 400,
        contamination: 0.02,
        ..GenSpec::benchmark_default(13)
    };
    let dataset = generate(&spec)?;

    let config = DetectionConfig::new(8).with_metric(MetricKind::Mahalanobis);
    let report = detect(&dataset.points, &config)?;

    let peel = onion_peel(&dataset.points)?;
    let rings: Vec<Vec<Point2>> = peel
        .layers
        .iter()
        .take(5) // outermost rings only; deep layers just clutter the plot
        .map(|l| l.vertex_ids.iter().map(|&id| dataset.points[id]).collect())
        .collect();

    let svg = scatter_svg(
        &dataset.points,
        &report.outlier_ids,
        &rings,
        &SvgOptions::default(),
    );

    let out_dir = PathBuf::from("target/example-out");
    fs::create_dir_all(&out_dir).expect("create output directory");
    let path = out_dir.join("outliers.svg");
    fs::write(&path, &svg).expect("write svg");
    println!(
        "marked {} outliers over {} rings -> {}",
        report.outlier_ids.len(),
        rings.len(),
        path.display()
    );
    Ok(())
}
