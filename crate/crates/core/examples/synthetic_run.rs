//! Cleans a synthetic bitext and scores it against the generator's truth.
//!
//! `cargo run --release --example synthetic_run [key=value ...]`, where keys
//! are generator settings such as `seed=7` or `zipf_exponent=1.3`.

use lexclean::assoc::{build_initial_lexicon, count_cooccurrences, InitialLexiconOptions};
use lexclean::corpus::Preprocessor;
use lexclean::eval::{gold_precision, measure_recall, precision_at_recall, GoldLexicon};
use lexclean::pipeline::{apply_cutoff, clean_with, greedy_baseline, CleanConfig, CutoffSpec};
use lexclean::synth::{generate_bitext, GeneratorConfig};

fn main() -> lexclean::Result<()> {
    let overrides: serde_json::Map<String, serde_json::Value> = std::env::args()
        .skip(1)
        .map(|arg| {
            let (k, v) = arg.split_once('=').expect("expected key=value");
            (k.to_owned(), serde_json::from_str(v).expect("value must be a number"))
        })
        .collect();
    let config: GeneratorConfig =
        serde_json::from_value(overrides.into()).expect("unknown generator setting");
    println!("{config:?}");
    let (corpus, truth) = generate_bitext(&config)?;
    let gold = GoldLexicon::from_pairs(truth.pairs.iter().cloned(), &Preprocessor::default());

    let table = count_cooccurrences(&corpus, None)?;
    let initial = build_initial_lexicon(&table, &corpus, &InitialLexiconOptions::default())?;
    let truth_ids = gold.ids_in(&corpus);
    println!("iter\tlambda_right\tlambda_wrong\tentries\tmean_ll\ttrue_right\ttrue_wrong\twrong_entries");
    let outcome = clean_with(&corpus, &initial, &CleanConfig::default(), |state| {
        let (mut kr, mut nr, mut kw, mut nw, mut wrong) = (0, 0, 0, 0, 0);
        for e in state.lexicon.entries() {
            if truth_ids.contains(&e.key()) {
                (kr, nr) = (kr + e.links, nr + e.cooc);
            } else {
                (kw, nw, wrong) = (kw + e.links, nw + e.cooc, wrong + 1);
            }
        }
        let r = state.report;
        println!(
            "{}\t{:.6}\t{:.6}\t{}\t{:.4}\t{:.6}\t{:.6}\t{wrong}",
            r.iteration,
            r.lambda_right,
            r.lambda_wrong,
            r.entries_in_lexicon,
            r.mean_entry_log_likelihood,
            kr as f64 / nr as f64,
            kw as f64 / nw as f64
        );
        Ok(())
    })?;
    println!("fixed point: {}", outcome.reached_fixed_point);

    for preset in ["1/1", "2/2", "3/3"] {
        let cut = apply_cutoff(&outcome.lexicon, preset.parse().unwrap())?;
        let recall = measure_recall(&cut, &corpus);
        println!(
            "{preset}\tentries {}\tprecision {:.4}\trecall {:.3}",
            cut.len(),
            100.0 * gold_precision(&cut, &corpus, &gold),
            recall.combined.percent
        );
    }

    let one = apply_cutoff(&outcome.lexicon, CutoffSpec::Plateau { k: 1, n: 1 })?;
    let target = measure_recall(&one, &corpus).combined.percent;
    let baseline = greedy_baseline(&corpus, f64::NEG_INFINITY)?;
    match precision_at_recall(&baseline, &corpus, &gold, target) {
        Some((p, r, n)) => println!(
            "baseline at {target:.3}% recall: precision {:.4}, {n} entries, recall {:.3}",
            100.0 * p,
            r.combined.percent
        ),
        None => println!("baseline never reaches {target:.3}% recall"),
    }
    Ok(())
}
