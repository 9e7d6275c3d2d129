//! End-to-end series values. The nonzero-order values were cross-checked
//! against an independent symbolic computation of the same characters.

use hft_vertex::algebra::Specialization;
use hft_vertex::geometry::{FixedPoint, LocalP1Config};
use hft_vertex::localization::{
    closed_form_series, diagnostic_table, euler_weight, vertex_series, Reading, SpecSampler,
    TangentTable,
};
use hft_vertex::vertex::{virtual_tangent, PipelineOptions};
use num_rational::BigRational;

fn ints(xs: &[i64]) -> Vec<BigRational> {
    xs.iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect()
}

fn series(r: usize, n: u32, k: u32, spec: &Specialization) -> Vec<BigRational> {
    let config = LocalP1Config::new(r, n).unwrap();
    vertex_series(config, k, spec, &PipelineOptions::default())
        .unwrap()
        .coefficients()
        .to_vec()
}

#[test]
fn closed_form_rank_two_untwisted() {
    // (1 + q)^-2
    assert_eq!(
        closed_form_series(2, 0, 4).coefficients(),
        ints(&[1, -2, 3, -4, 5])
    );
    // (1 + q)^-1
    assert_eq!(
        closed_form_series(1, 0, 3).coefficients(),
        ints(&[1, -1, 1, -1])
    );
}

#[test]
fn order_zero_is_one_for_every_twist() {
    let spec = Specialization::calabi_yau(1, 2, &[5, 13]).unwrap();
    for n in 0..4 {
        assert_eq!(series(2, n, 0, &spec), ints(&[1]));
    }
}

#[test]
fn rank_one_series_is_twist_independent() {
    let spec = Specialization::calabi_yau(1, 2, &[5]).unwrap();
    for n in 0..3 {
        assert_eq!(series(1, n, 4, &spec), ints(&[1, -2, 3, -4, 5]));
    }
}

#[test]
fn rank_two_series() {
    for spec in [
        Specialization::calabi_yau(1, 2, &[5, 13]).unwrap(),
        Specialization::calabi_yau(1, 2, &[2, 19]).unwrap(),
    ] {
        for n in 0..2 {
            assert_eq!(series(2, n, 3, &spec), ints(&[1, 4, 10, 20]));
        }
    }
}

#[test]
fn rank_three_series() {
    let spec = Specialization::calabi_yau(3, -7, &[5, 13, 29]).unwrap();
    assert_eq!(series(3, 0, 2, &spec), ints(&[1, -6, 21]));
}

#[test]
fn contributions_are_signs_on_the_cy_locus() {
    let config = LocalP1Config::new(2, 1).unwrap();
    let table = TangentTable::build(config, 3, &PipelineOptions::default()).unwrap();
    let spec = SpecSampler::new(11).draw_generic(&table).unwrap();
    let one = BigRational::from_integer(1.into());
    for t in table.iter() {
        let w = euler_weight(t, &spec).unwrap();
        assert!(w == one || w == -&one, "{}: {w}", t.source());
    }
}

#[test]
fn off_the_cy_locus_contributions_depend_on_weights() {
    let config = LocalP1Config::new(1, 0).unwrap();
    let fp = FixedPoint::new(config, &[1], &[0]).unwrap();
    let t = virtual_tangent(&fp, &PipelineOptions::default()).unwrap();
    // t1^-1 - t2^-1 t3^-1: weight (-(s2 + s3)) / (-s1)
    let spec = Specialization::unconstrained([2, 3, 5], &[1]).unwrap();
    assert_eq!(
        euler_weight(&t, &spec).unwrap(),
        BigRational::new(4.into(), 1.into())
    );
}

#[test]
fn diagnostic_rows_cover_every_fixed_point() {
    let config = LocalP1Config::new(2, 0).unwrap();
    let table = TangentTable::build(config, 1, &PipelineOptions::default()).unwrap();
    let spec = Specialization::calabi_yau(1, 2, &[5, 13]).unwrap();
    let rows = diagnostic_table(&table, &spec).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].agrees(Reading::A) && rows[0].agrees(Reading::B));
    for row in &rows[1..] {
        assert_eq!(row.readings.len(), 2);
        assert!(row.readings.iter().all(|(_, v)| v.is_ok()));
    }
}
