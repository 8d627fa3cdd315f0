use resint_core::cyclo::{min_poly_cos, totient};

fn main() {
    let t0 = std::time::Instant::now();
    for p in 3..=50u64 {
        let m = min_poly_cos(p);
        assert_eq!(m.degree() as u64, totient(p) / 2, "p = {p}");
    }
    println!("min_poly_cos 3..=50 ok in {:?}", t0.elapsed());
    let t1 = std::time::Instant::now();
    let m97 = min_poly_cos(97);
    assert_eq!(m97.degree(), 48);
    println!("p=97 (degree 48) in {:?}", t1.elapsed());
}
