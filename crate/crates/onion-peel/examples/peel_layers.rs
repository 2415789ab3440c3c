//! Decompose a point set into nested convex layers and print the layer
//! table: vertex count and enclosed area per layer, outermost first.
//!
//! Run with: `cargo run --example peel_layers`

use onion_peel::{generate, onion_peel, GenSpec};

fn main() -> onion_peel::Result<()> {
    let spec = GenSpec {
        n: 200,
        contamination: 0.0,
        ..GenSpec::benchmark_default(7)
    };
    let dataset = generate(&spec)?;

    let peel = onion_peel(&dataset.points)?;
    println!("{} layers over {} points", peel.layers.len(), dataset.n());
    println!("{:>6} {:>9} {:>14}", "layer", "vertices", "area");
    for (i, layer) in peel.layers.iter().enumerate() {
        println!(
            "{:>6} {:>9} {:>14.4}",
            i,
            layer.vertex_ids.len(),
            layer.area
        );
    }
    println!("residual points: {:?}", peel.residual_ids);

    // The depth of a point is the index of the layer it surfaced on.
    let deepest = peel.layers.len() - 1;
    let example_id = peel.layers[deepest].vertex_ids[0];
    println!(
        "point {} sits at depth {} of {}",
        example_id,
        peel.layer_of(example_id).unwrap(),
        deepest
    );
    Ok(())
}
