use resint_core::map::parse::parse_map;
use resint_core::obstruction::planar::analyze_planar;
use resint_core::obstruction::Verdict;

fn main() {
    let t0 = std::time::Instant::now();
    let m = parse_map("vars x,y; f = (x + y^2 - x*y, (x^2 + x*y + 1)/(x^2 - 3*y + 1))").unwrap();
    let out = analyze_planar(&m, 6).unwrap();
    println!("verdict: {:?}", out.verdict);
    println!("elapsed: {:?}", t0.elapsed());
    for fp in &out.fixed_points {
        println!("fp: {:?}", fp.point);
        for c in &fp.hypothesis_checks {
            println!("  check {}: {} holds={}", c.name, c.outcome, c.holds);
        }
        for e in &fp.certificate {
            let v = if e.value.len() > 140 { format!("{}...", &e.value[..140]) } else { e.value.clone() };
            println!("  {} = {}", e.label, v);
        }
    }
    assert!(matches!(out.verdict, Verdict::Excluded));
}
