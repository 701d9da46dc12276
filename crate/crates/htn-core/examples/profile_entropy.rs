use htn_core::codes::{x_eigenstate, EdgeTensorKind, VertexTensorKind};
use htn_core::entropy::entanglement;
use htn_core::network::{CodeNetwork, ContractionOptions};
use htn_core::tiling::{BoundaryRegion, HyperbolicTiling, TilingParams};
use std::time::Instant;

fn main() {
    let t = HyperbolicTiling::build(TilingParams::new(5, 4, 1)).unwrap();
    let net = CodeNetwork::new(t, VertexTensorKind::APrime4112, EdgeTensorKind::Hadamard4)
        .unwrap()
        .with_uniform_bulk(&x_eigenstate(0));
    let total = net.tiling.boundary_len();
    for (start, len) in [(0usize, 3usize), (4, 7), (11, 10), (0, 17), (4, 13)] {
        let t0 = Instant::now();
        let region = BoundaryRegion::contiguous(start, len, total);
        let rep = entanglement(&net, &[], &region, ContractionOptions::default()).unwrap();
        println!("({start},{len}): S = {:.6} (cut {}), took {:?}", rep.entropy, rep.cut_length, t0.elapsed());
    }
}
