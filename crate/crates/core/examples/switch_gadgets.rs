//! External behaviour of the three switch gadgets.

use chamber::compile::{abstract_switch, check_switch_contract, instantiate_switch_gadget, SwitchKind};

fn main() {
    let check = check_switch_contract(&abstract_switch(), 6).unwrap();
    println!("abstract: {check:?}");
    for kind in SwitchKind::ALL {
        let gadget = instantiate_switch_gadget(kind);
        match check_switch_contract(&gadget, 6) {
            Ok(c) => println!(
                "{:<8} {} rooms, {} sequences, {} outside observations, {} configurations",
                kind.name(),
                gadget.level.rooms.len(),
                c.sequences,
                c.outside_observations,
                c.reachable_states
            ),
            Err(e) => println!("{:<8} fails: {e}", kind.name()),
        }
    }
}
