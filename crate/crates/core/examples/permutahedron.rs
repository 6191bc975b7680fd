//! The ε-permutahedron as Rado facets and as a sorting-network formulation.
use quasiproper::permutahedron::{base_vector, batcher_network, facet_system, membership, network_system, PermSpec};
use quasiproper::{rat, EpsPoly};

fn main() {
    let m = 4;
    let k = 1;
    let spec = PermSpec::new(EpsPoly::one(), k, m);
    let facets = facet_system(&spec).expect("valid spec");
    let net = batcher_network(m);
    let network = network_system(&spec, &net).expect("valid spec");
    println!("m = {m}: {} facet inequalities; {} comparators and {} wires in the network form",
        facets.inequalities(), net.gates.len(), network.auxiliary.len());

    let eps = rat(1, 10);
    let p = base_vector(&rat(1, 1), k, m, &eps).expect("mass is large enough");
    let shown: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    println!("base vector at ε = 1/10: {}", shown.join(", "));

    let mut x = p.clone();
    x.reverse();
    println!("reversed base vector is a member: {}", membership(&spec, &x, &eps));
    // push the smallest coordinate below its bound
    x[0] -= rat(1, 1000);
    x[3] += rat(1, 1000);
    println!("after shifting 1/1000 away from the smallest: {}", membership(&spec, &x, &eps));
}
