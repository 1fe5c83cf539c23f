//! Landing distance is independent of gravity.

use chamber::kinematics::{free_fall, KinematicsParams, Rational};

fn main() {
    let s = Rational::int(1728);
    for alpha in [Rational::int(10), Rational::new(98, 10), Rational::new(1, 3), Rational::int(1000)] {
        let params = KinematicsParams::new(alpha.clone(), Rational::int(1), Rational::int(8));
        let fall = free_fall(&s, &params).unwrap();
        println!("alpha {alpha:>6}: v_f^2 = {}, d^2 = {}", fall.v_f_sq, fall.landing_sq);
    }
    println!("4 s h = {}", &(&Rational::int(4) * &s) * &Rational::int(8));
}
