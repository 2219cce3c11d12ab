//! Section counts of the structure sheaf of a marked union of lines, and
//! the dimension of its degree-`d` ideal slice, checked against the closed
//! formulas for the worked configuration: the union of `n` concurrent
//! lines glued along their marks has `nd + 1` independent degree-`d`
//! functions, and the two counts always sum to the full space of forms.

use splitcert_core::config::{hilbert_ideal, hilbert_structure};
use splitcert_core::example::build_example;
use splitcert_core::field::{Field, PrimeField, Rationals};
use splitcert_core::multi::binomial;

fn check_configuration<K: Field>(field: K, n: usize) {
    let inst = build_example(field, n).unwrap();
    let config = inst.standard_configuration().unwrap();
    for d in 1..=4i64 {
        let structure = hilbert_structure(&config, d).unwrap();
        assert_eq!(
            structure,
            n * d as usize + 1,
            "structure sections at degree {d} for n = {n}"
        );
        let ideal = hilbert_ideal(&config, d as u32).unwrap();
        let total = binomial(n + d as usize, d as usize);
        assert_eq!(
            structure + ideal,
            total,
            "restriction of degree-{d} forms is not surjective for n = {n}"
        );
    }
}

#[test]
fn glued_lines_over_the_rationals() {
    check_configuration(Rationals, 4);
    check_configuration(Rationals, 5);
}

#[test]
fn glued_lines_over_prime_fields() {
    check_configuration(PrimeField::new(5).unwrap(), 4);
    check_configuration(PrimeField::new(2).unwrap(), 5);
    check_configuration(PrimeField::new(101).unwrap(), 6);
}
