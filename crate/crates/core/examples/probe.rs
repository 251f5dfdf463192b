use fuchsop::catalog::*;
use fuchsop::factor::*;
use fuchsop::rat::*;
use fuchsop::weyl::*;
use std::time::Instant;

fn main() {
    let e8 = ExponentSet::new(vec![
        rat(1, 7), rat(2, 7), rat(4, 7),
        rat(1, 5), rat(2, 5), rat(3, 5),
        rat(1, 11), rat(2, 11),
    ]);
    // replicate the n=2 recursion with timing
    let t0 = Instant::now();
    let mut q1 = DiffOp::d_power(3);
    let mut q2 = e6_v_operator(&e8).unwrap();
    for k in 0..2 {
        let t = Instant::now();
        let f = q2.apply_func(&fuchsop::ratfunc::RatFunc::one());
        let q1n = (&(&DiffOp::d() * &q1) * &DiffOp::func(f.clone())).right_div_exact(&DiffOp::d()).unwrap();
        let q2n = (&DiffOp::d() * &(&DiffOp::func(f.inv().unwrap()) * &q2)).right_div_exact(&DiffOp::d()).unwrap();
        println!("level {k}: {:?}; f deg {}/{}", t.elapsed(), f.num().deg0(), f.den().deg0());
        q1 = q1n; q2 = q2n;
    }
    println!("recursion total {:?}", t0.elapsed());
    for (j, c) in q1.coeffs().iter().enumerate() {
        println!("q1 coeff {j}: deg {}/{}", c.num().deg0(), c.den().deg0());
    }
    let t1 = Instant::now();
    let ker = rational_kernel(&q1, 3).unwrap();
    println!("kernel: {:?}, dims {}", t1.elapsed(), ker.len());
    for h in &ker { println!("  h: {}/{}", h.num().deg0(), h.den().deg0()); }
}
