use contourgas::lattice::*;

fn main() {
    let t0 = std::time::Instant::now();
    let cat = Catalog::build(12).unwrap();
    println!("build L=12: {:?}", t0.elapsed());
    println!("classes total: {}", cat.classes().len());
    for (len, classes, through) in cat.counts_by_length() {
        println!("len {len}: classes {classes}, through-anchor {through}");
    }
    // per-face (vertex) instance counts
    let mut by_len = std::collections::BTreeMap::new();
    for inst in cat.instances_through_face(Point::ORIGIN) {
        *by_len.entry(cat.length_of(inst)).or_insert(0usize) += 1;
    }
    println!("through-face counts: {:?}", by_len);
    // alpha estimates at various beta: per-face sum of |θ| e^{-β|θ|}
    for beta in [0.9, 0.95, 1.0, 1.05, 1.1, 1.2, 1.5, 2.0] {
        let s: f64 = by_len.iter().map(|(&l, &k)| k as f64 * l as f64 * (-beta * l as f64).exp()).sum();
        let s0: f64 = by_len.iter().map(|(&l, &k)| k as f64 * (-beta * l as f64).exp()).sum();
        // alpha0: through anchor plaquette
        let a0: f64 = cat.counts_by_length().iter().map(|&(l, _, t)| t as f64 * l as f64 * (-beta * l as f64).exp()).sum();
        println!("beta {beta}: face |θ|-sum {s:.4}, face rate-sum {s0:.4}, alpha0 {a0:.4}");
    }
    println!("geometric fit: {:?}", cat.fit_geometric_tail());
    let t1 = std::time::Instant::now();
    let cat14 = Catalog::build(14);
    match cat14 {
        Ok(c) => {
            println!("build L=14: {:?}, classes {}", t1.elapsed(), c.classes().len());
            for (len, classes, through) in c.counts_by_length() { println!("  len {len}: {classes} classes, {through} through"); }
        }
        Err(e) => println!("L=14: {e}"),
    }
}
