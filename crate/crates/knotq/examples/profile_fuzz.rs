fn main() {
    use knotq::braid::BraidWord;
    use knotq::invariant::{full_report_braid, PipelineOptions};
    use knotq::moves::{random_move_sequence, MoveCaps};
    use std::time::Instant;
    let b = BraidWord::new(5, vec![-1, -1, -1, -2, 1, -2, -3, 2, -3, -4, 3, -4]).unwrap();
    let caps = MoveCaps::default();
    for seed in 0..4u64 {
        let (w, _) = random_move_sequence(&b, 30, seed, &caps);
        let t0 = Instant::now();
        let _r = full_report_braid(&w, &PipelineOptions::default()).unwrap();
        let t1 = t0.elapsed();
        let t0 = Instant::now();
        let _d = knotq::burau::burau_determinant(&w).unwrap();
        let t2 = t0.elapsed();
        println!(
            "len {} strands {}: pipeline {:?}, burau {:?}",
            w.letters.len(),
            w.strands,
            t1,
            t2
        );
    }
}
