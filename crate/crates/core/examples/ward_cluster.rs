use corpsim::analysis::{ward_cluster, SimilarityMatrix};

fn main() -> corpsim::Result<()> {
    let ids = ["news-a", "news-b", "fiction-a", "fiction-b"].map(String::from).to_vec();
    let rho = vec![
        vec![1.00, 0.91, 0.52, 0.50],
        vec![0.91, 1.00, 0.55, 0.49],
        vec![0.52, 0.55, 1.00, 0.88],
        vec![0.50, 0.49, 0.88, 1.00],
    ];
    let dendrogram = ward_cluster(&SimilarityMatrix::new(ids, rho)?);
    for m in &dendrogram.merges {
        println!("merge {} + {} at {:.4} (size {})", m.node_a, m.node_b, m.height, m.merged_size);
    }
    let (left, right) = dendrogram.top_split().expect("four leaves");
    let names = |side: Vec<usize>| side.into_iter().map(|i| dendrogram.leaves[i].as_str()).collect::<Vec<_>>();
    println!("top split: {:?} | {:?}", names(left), names(right));
    Ok(())
}
