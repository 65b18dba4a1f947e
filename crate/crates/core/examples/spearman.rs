use corpsim::features::{FeatureSpace, FeatureType, FrequencyVector};
use corpsim::similarity::{average_ranks, spearman_rho};

fn main() -> corpsim::Result<()> {
    println!("ranks {:?}", average_ranks(&[10, 0, 0, 5]));

    let items = ["a", "b", "c", "d"].map(String::from).to_vec();
    let space = FeatureSpace::new(FeatureType::W1, 4, "toy", items)?;
    let v1 = FrequencyVector::from_counts(space.id(), vec![10, 0, 0, 5], 15);
    let v2 = FrequencyVector::from_counts(space.id(), vec![8, 1, 0, 4], 13);
    println!("rho = {}", spearman_rho(&v1, &v2)?);

    let flat = FrequencyVector::from_counts(space.id(), vec![3, 3, 3, 3], 12);
    println!("constant vector: {}", spearman_rho(&v1, &flat).unwrap_err());
    Ok(())
}
