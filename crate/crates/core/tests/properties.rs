use proptest::prelude::*;

use synconn::calculus::{
    cut, match_conclusion, substitute, ConnectiveSpec, Formula, Item, Provenance, RuleScheme, Sequent, Side,
    Substitution,
};
use synconn::classify::{classify, matrix_to_rules, normalize_to_scheme, Polarity, SchemeMatrix};
use synconn::cut::check_main_cut_step;
use synconn::doi::{check_doi, DoiMode};
use synconn::dsl::{parse_spec, spec_source};
use synconn::generator::{mutate, random_connective, GenBounds, MutationKind};
use synconn::reflection::check_reflection;

fn atom() -> impl Strategy<Value = Formula> {
    prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom)
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(2, 6, 2, |inner| {
        prop::collection::vec(inner, 1..=2).prop_map(|args| Formula::compound("K", args))
    })
}

fn item() -> impl Strategy<Value = Item> {
    prop_oneof![
        3 => formula().prop_map(Item::Formula),
        1 => prop::sample::select(vec!["X", "Y"]).prop_map(Item::ctx),
    ]
}

fn side_items() -> impl Strategy<Value = Vec<Item>> {
    prop::collection::vec(item(), 0..4)
}

fn schematic_item() -> impl Strategy<Value = Item> {
    prop_oneof![
        2 => (1usize..=3).prop_map(|i| Item::Formula(Formula::meta(i, ["A", "B", "C"][i - 1]))),
        1 => atom().prop_map(Item::Formula),
        1 => prop::sample::select(vec!["G", "D"]).prop_map(Item::ctx),
    ]
}

fn schematic_side() -> impl Strategy<Value = Vec<Item>> {
    prop::collection::vec(schematic_item(), 0..4)
}

/// Substitution over metas 1..=3 and contexts G, D.
fn substitution() -> impl Strategy<Value = Substitution> {
    (prop::collection::vec(formula(), 3), side_items(), side_items()).prop_map(|(fs, g, d)| {
        let mut s = Substitution::new();
        for (i, f) in fs.into_iter().enumerate() {
            s = s.bind_meta(i + 1, f);
        }
        s.bind_context("G", g).bind_context("D", d)
    })
}

fn rename_contexts(spec: &ConnectiveSpec) -> ConnectiveSpec {
    let rename = |s: &Sequent| {
        s.map_items(|i| match i {
            Item::Context(c) => vec![Item::ctx(format!("{}_r", c.name()))],
            other => vec![other.clone()],
        })
    };
    let rules = spec
        .rules
        .iter()
        .map(|r| RuleScheme::new(r.name.clone(), r.side, r.premises.iter().map(rename).collect(), rename(&r.conclusion)))
        .collect();
    ConnectiveSpec::new(spec.name.clone(), spec.args.clone(), rules, spec.provenance.clone())
}

fn kind() -> impl Strategy<Value = MutationKind> {
    prop::sample::select(MutationKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_reproduce_the_goal(seed in any::<u64>(), pick in any::<prop::sample::Index>(), sub in substitution()) {
        let spec = random_connective(seed, GenBounds::default());
        let rule = pick.get(&spec.rules);
        // bind every context of the conclusion so the goal is fully instantiated
        let mut sub = sub;
        for c in rule.conclusion.all_contexts() {
            sub.contexts.entry(c).or_insert_with(|| vec![Item::Formula(Formula::atom("s"))]);
        }
        for i in 1..=spec.arity() {
            sub.metas.entry(i).or_insert_with(|| Formula::atom("t"));
        }
        let goal = substitute(&rule.conclusion, &sub);
        let found = match_conclusion(rule, &goal);
        prop_assert!(!found.is_empty());
        for s in found {
            prop_assert_eq!(substitute(&rule.conclusion, &s), goal.clone());
        }
    }

    #[test]
    fn cut_removes_exactly_one_occurrence(a1 in side_items(), s1 in side_items(), a2 in side_items(), s2 in side_items(), f in formula()) {
        let mut s1f = s1.clone();
        s1f.push(Item::Formula(f.clone()));
        let mut a2f = a2.clone();
        a2f.push(Item::Formula(f.clone()));
        let left = Sequent::new(a1.clone(), s1f);
        let right = Sequent::new(a2f, s2.clone());
        let out = cut(&left, &right, &f).unwrap();
        prop_assert_eq!(out.antecedent().len(), a1.len() + a2.len() + 1 - 1);
        prop_assert_eq!(out.succedent().len(), s1.len() + 1 + s2.len() - 1);
        let fi = Item::Formula(f);
        let expected = left.count(Side::Right, &fi) - 1 + right.count(Side::Right, &fi);
        prop_assert_eq!(out.count(Side::Right, &fi), expected);
    }

    #[test]
    fn substitution_commutes_with_cut(a1 in schematic_side(), s1 in schematic_side(), a2 in schematic_side(), s2 in schematic_side(), sub in substitution()) {
        let f = Formula::meta(1, "A");
        let mut s1f = s1;
        s1f.push(Item::Formula(f.clone()));
        let mut a2f = a2;
        a2f.push(Item::Formula(f.clone()));
        let left = Sequent::new(a1, s1f);
        let right = Sequent::new(a2f, s2);
        let before = substitute(&cut(&left, &right, &f).unwrap(), &sub);
        let after = cut(&substitute(&left, &sub), &substitute(&right, &sub), &f.substitute(&sub.metas)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn identities_stay_identities(i in 1usize..=3, sub in substitution()) {
        let m = Item::Formula(Formula::meta(i, "A"));
        let id = Sequent::new(vec![m.clone()], vec![m]);
        prop_assert!(id.is_axiom());
        prop_assert!(substitute(&id, &sub).is_axiom());
    }

    #[test]
    fn render_then_parse_is_a_fixpoint(seed in any::<u64>(), k in kind()) {
        let base = random_connective(seed, GenBounds::default());
        let specs = match mutate(&base, k, seed) {
            Ok(m) => vec![base, m],
            Err(_) => vec![base],
        };
        for spec in specs {
            let text = spec_source(&spec);
            let parsed = parse_spec(&text).unwrap();
            prop_assert_eq!(parsed.len(), 1);
            let mut expected = spec.clone();
            expected.provenance = Provenance::Parsed;
            prop_assert_eq!(&parsed[0], &expected);
            prop_assert_eq!(spec_source(&parsed[0]), text);
        }
    }

    #[test]
    fn matrix_round_trips_through_rules(
        positive in any::<bool>(),
        n in 1usize..=4,
        raw in prop::collection::vec(prop::collection::vec(0usize..4, 1..=3), 1..=3),
    ) {
        let polarity = if positive { Polarity::Positive } else { Polarity::Negative };
        let mut branches: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|b| {
                let mut b: Vec<usize> = b.into_iter().map(|x| x % n + 1).collect();
                b.sort_unstable();
                b
            })
            .collect();
        branches.sort();
        branches.dedup();
        let args: Vec<String> = ["A", "B", "C", "D"][..n].iter().map(|s| s.to_string()).collect();
        let matrix = SchemeMatrix { polarity, args: args.clone(), branches };
        let spec = ConnectiveSpec::new("M", args, matrix_to_rules("M", &matrix), Provenance::Parsed);
        prop_assert_eq!(normalize_to_scheme(&spec, polarity), Ok(matrix));
    }

    #[test]
    fn verdicts_ignore_context_names(seed in any::<u64>(), k in kind()) {
        let base = random_connective(seed, GenBounds::default());
        let spec = mutate(&base, k, seed).unwrap_or(base);
        let renamed = rename_contexts(&spec);
        prop_assert_eq!(check_main_cut_step(&spec).holds, check_main_cut_step(&renamed).holds);
        prop_assert_eq!(check_reflection(&spec).satisfied, check_reflection(&renamed).satisfied);
        prop_assert_eq!(classify(&spec).synthetic, classify(&renamed).synthetic);
        prop_assert_eq!(
            check_doi(&spec, DoiMode::TwoPhase, None).unwrap().holds,
            check_doi(&renamed, DoiMode::TwoPhase, None).unwrap().holds
        );
    }

    #[test]
    fn generated_connectives_pass_every_check(seed in any::<u64>()) {
        let spec = random_connective(seed, GenBounds::default());
        prop_assert!(check_doi(&spec, DoiMode::TwoPhase, None).unwrap().holds);
        prop_assert!(check_main_cut_step(&spec).holds);
        prop_assert!(check_reflection(&spec).satisfied);
        prop_assert!(classify(&spec).synthetic);
    }

    #[test]
    fn mutants_fail_reflection_and_the_conjunction(seed in any::<u64>(), k in kind()) {
        let base = random_connective(seed, GenBounds::default());
        if let Ok(spec) = mutate(&base, k, seed) {
            let doi = check_doi(&spec, DoiMode::TwoPhase, None).unwrap().holds;
            let cut_ok = check_main_cut_step(&spec).holds;
            prop_assert!(!check_reflection(&spec).satisfied);
            prop_assert!(!(doi && cut_ok));
            prop_assert!(!classify(&spec).synthetic);
        }
    }

    #[test]
    fn two_phase_certificates_fit_depth_four(seed in any::<u64>(), k in kind()) {
        let base = random_connective(seed, GenBounds::default());
        let spec = mutate(&base, k, seed).unwrap_or(base);
        if check_doi(&spec, DoiMode::TwoPhase, None).unwrap().holds {
            prop_assert!(check_doi(&spec, DoiMode::Bounded, Some(4)).unwrap().holds);
        }
    }
}
