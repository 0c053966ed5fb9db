import math
import random

import pytest

from cfwords.exactlin import Vector3
from cfwords.factors import (EMPTY_WORD_EXTENSIONS, NONORDINARY_FAMILY,
                             ExtensionSet, antecedent_chain, audit_tree_word,
                             build_index, chain_blocks_for, empty_extension_set,
                             extension_set, is_ordinary, is_tree,
                             propagate_extensions, stabilized_horizon)
from cfwords.morphisms import CPRIME, apply
from cfwords.sadic import generate, shifted_word
from helpers import (brute_bispecials, brute_complexity, brute_extension_pairs,
                     brute_factors, random_word)

GOLDEN = Vector3.floats(1.0, math.e, math.pi)


class TestBuildIndex:
    def test_short_word_rejected(self):
        with pytest.raises(ValueError):
            build_index("121", 5)

    def test_complexity_matches_brute_force(self):
        rng = random.Random(1)
        for _ in range(15):
            w = random_word(rng, rng.randint(30, 120))
            nmax = min(12, len(w) - 2)
            idx = build_index(w, nmax)
            assert idx.complexity() == brute_complexity(w, nmax)

    def test_complexity_starts_at_one(self):
        idx = build_index(generate(GOLDEN, 500).word, 10)
        assert idx.complexity()[0] == 1

    def test_extension_sets_match_brute_force(self):
        rng = random.Random(2)
        for _ in range(10):
            w = random_word(rng, rng.randint(40, 150))
            idx = build_index(w, 10, ext_max=6)
            for n in range(7):
                for u in brute_factors(w, n):
                    assert idx.extension_set(u).pairs == \
                        brute_extension_pairs(w, u), (w, u)

    def test_extension_set_beyond_ext_max_rejected(self):
        idx = build_index("1213121", 4, ext_max=2)
        with pytest.raises(ValueError):
            idx.extension_set("121")

    def test_absent_factor_rejected(self):
        idx = build_index(generate(GOLDEN, 300).word, 8, ext_max=4)
        with pytest.raises(KeyError):
            idx.extension_set("1111")

    def test_factors_of_length(self):
        w = "12131213"
        idx = build_index(w, 3)
        assert set(idx.factors_of_length(2)) == brute_factors(w, 2)

    def test_bispecials_match_brute_force(self):
        rng = random.Random(3)
        for _ in range(8):
            w = random_word(rng, rng.randint(50, 150))
            idx = build_index(w, 10, ext_max=8)
            got = [b.factor for b in idx.bispecials(8)]
            assert sorted(got) == sorted(brute_bispecials(w, 8))

    def test_first_difference_identity(self):
        # p(n+1) - p(n) equals the right-valence excess of length-n factors
        w = generate(GOLDEN, 4000).word
        idx = build_index(w, 20, ext_max=20)
        counts = idx.complexity()
        for n in range(12):
            excess = 0
            for u in idx.factors_of_length(n):
                rights = idx.extension_set(u).right_letters
                if len(rights) >= 2:
                    excess += len(rights) - 1
            assert counts[n + 1] - counts[n] == excess


class TestStabilizedHorizon:
    def test_agreement_prefix(self):
        assert stabilized_horizon((1, 3, 5), (1, 3, 5, 7)) == 2
        assert stabilized_horizon((1, 3, 5, 7), (1, 3, 6, 7)) == 1
        assert stabilized_horizon((2,), (1,)) == -1


class TestExtensionSetPredicates:
    def test_cross_is_ordinary(self):
        cross = frozenset({(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)})
        assert is_ordinary(ExtensionSet("u", cross))

    def test_b1_is_tree_not_ordinary(self):
        b1 = ExtensionSet("u", frozenset({(2, 1), (2, 3), (3, 1), (3, 2)}))
        assert is_tree(b1)
        assert not is_ordinary(b1)

    def test_cycle_is_not_tree(self):
        square = ExtensionSet("u", frozenset({(1, 1), (1, 2), (2, 1), (2, 2)}))
        assert not is_tree(square)

    def test_disconnected_is_not_tree(self):
        assert not is_tree(ExtensionSet("u", frozenset({(1, 1), (2, 2)})))

    def test_bispecial_detection(self):
        assert ExtensionSet("u", frozenset({(1, 1), (2, 2)})).is_bispecial
        assert not ExtensionSet("u", frozenset({(1, 1), (1, 2)})).is_bispecial


class TestEmptyWordTables:
    def test_all_six_frozen(self):
        assert EMPTY_WORD_EXTENSIONS["c11"] == \
            frozenset({(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)})
        assert EMPTY_WORD_EXTENSIONS["c22"] == \
            frozenset({(1, 3), (2, 3), (3, 1), (3, 2), (3, 3)})
        assert EMPTY_WORD_EXTENSIONS["c122"] == \
            frozenset({(1, 2), (1, 3), (2, 1), (2, 2), (3, 2)})
        assert EMPTY_WORD_EXTENSIONS["c211"] == \
            frozenset({(1, 3), (2, 1), (2, 2), (2, 3), (3, 2)})
        assert EMPTY_WORD_EXTENSIONS["c121"] == \
            frozenset({(1, 2), (1, 3), (2, 1), (3, 1), (3, 2)})
        assert EMPTY_WORD_EXTENSIONS["c212"] == \
            frozenset({(1, 3), (2, 1), (2, 3), (3, 1), (3, 2)})

    def test_each_is_bispecial_tree(self):
        for label in EMPTY_WORD_EXTENSIONS:
            e = empty_extension_set(label)
            assert e.is_bispecial
            assert is_tree(e)

    def test_unknown_label_rejected(self):
        with pytest.raises(ValueError):
            empty_extension_set("c21")

    def test_tables_observed_in_generated_words(self):
        # the empty word's harvested extensions equal the table of the first block
        from cfwords.morphisms import recode_cprime
        rng = random.Random(8)
        for _ in range(6):
            v = Vector3.floats(*(rng.random() + 0.05 for _ in range(3)))
            gw = generate(v, 6000)
            blocks, _ = recode_cprime(list(gw.directive.labels))
            idx = build_index(gw.word, 4, ext_max=2)
            assert idx.extension_set("").pairs == EMPTY_WORD_EXTENSIONS[blocks[0].label]


class TestPropagation:
    def test_left_proper_worked_example(self):
        out = propagate_extensions(empty_extension_set("c211"),
                                   CPRIME["c122"], "2", "")
        assert out.pairs == frozenset({(1, 2), (2, 1), (3, 1), (3, 2)})

    def test_right_proper_worked_example(self):
        out = propagate_extensions(empty_extension_set("c211"),
                                   CPRIME["c121"], "2", "1")
        assert out.pairs == frozenset({(1, 3), (3, 2), (3, 3)})

    def test_identity_blocks_fix_everything(self):
        # c11 with shape ("", "1") and c22 with ("3", "") change nothing
        from helpers import all_extension_sets
        for pairs in all_extension_sets():
            e = ExtensionSet("", pairs)
            assert propagate_extensions(e, CPRIME["c11"], "", "1").pairs == pairs
            assert propagate_extensions(e, CPRIME["c22"], "3", "").pairs == pairs

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            propagate_extensions(empty_extension_set("c11"), CPRIME["c11"], "3", "")

    def test_factor_carried_through(self):
        out = propagate_extensions(ExtensionSet("2", frozenset({(1, 3), (3, 2)})),
                                   CPRIME["c122"], "2", "")
        assert out.factor == "2" + apply(CPRIME["c122"].morphism, "2") + ""

    def test_agrees_with_harvested_extension_sets(self):
        # E(x tau(v) y) in w equals the propagation of E(v) in the preimage word
        gw = generate(GOLDEN, 60000)
        from cfwords.morphisms import recode_cprime
        blocks, _ = recode_cprime(list(gw.directive.labels))
        b0 = blocks[0]
        pre = shifted_word(GOLDEN, len(b0.branch_labels), 30000)
        idx_w = build_index(gw.word, 18, ext_max=16)
        idx_p = build_index(pre.word, 12, ext_max=10)
        from cfwords.morphisms import desubstitute
        checked = 0
        for b in idx_w.bispecials(14):
            if not b.factor:
                continue
            v, x, y = desubstitute(b.factor, b0)
            if len(v) > 10:
                continue
            propagated = propagate_extensions(idx_p.extension_set(v), b0, x, y)
            assert propagated.pairs == b.pairs, (b.factor, v, x, y)
            checked += 1
        assert checked >= 4


class TestNonOrdinaryFamily:
    def test_family_size_and_closure(self):
        assert len(NONORDINARY_FAMILY) == 8
        from cfwords.factors import _mirror
        for pairs in NONORDINARY_FAMILY:
            assert _mirror(pairs) in NONORDINARY_FAMILY
            assert not is_ordinary(ExtensionSet("u", pairs))
            assert is_tree(ExtensionSet("u", pairs))

    def test_contains_block_tables_and_figure_sets(self):
        for label in ("c122", "c211", "c121", "c212"):
            assert EMPTY_WORD_EXTENSIONS[label] in NONORDINARY_FAMILY
        for figure_set in (
            frozenset({(2, 1), (2, 3), (3, 1), (3, 2)}),
            frozenset({(1, 2), (1, 3), (2, 1), (2, 2)}),
            frozenset({(1, 3), (2, 2), (2, 3), (3, 2)}),
            frozenset({(1, 2), (2, 1), (3, 1), (3, 2)}),
        ):
            assert figure_set in NONORDINARY_FAMILY


class TestAntecedentChains:
    def test_chain_shortens_to_empty(self):
        gw = generate(GOLDEN, 30000)
        blocks = chain_blocks_for(GOLDEN, gw)
        idx = build_index(gw.word, 16, ext_max=16)
        for b in idx.bispecials(14):
            if not b.factor:
                continue
            chain = antecedent_chain(b.factor, blocks)
            lengths = [len(r.factor) for r in chain]
            assert lengths == sorted(lengths, reverse=True)
            assert all(len(r.antecedent) < len(r.factor) for r in chain)
            assert chain[-1].antecedent == ""

    def test_blocks_exhausted_raises(self):
        with pytest.raises(ValueError):
            antecedent_chain("1323232132323", ())


class TestAudit:
    def test_golden_audit_passes(self):
        report = audit_tree_word(GOLDEN, 20000, maxlen=20)
        assert report.passed
        assert report.horizon >= 20
        assert report.complexity_deviations == ()
        assert report.tree_failures == ()
        assert report.outside_family == ()
        assert report.bispecial_count >= 10

    def test_audit_json_fields(self):
        report = audit_tree_word(GOLDEN, 4000, maxlen=10)
        doc = report.to_json_dict()
        for key in ("vector", "L", "maxlen", "horizon", "complexity_table",
                    "complexity_deviations", "bispecial_count",
                    "non_ordinary_sets", "outside_family", "tree_failures",
                    "passed"):
            assert key in doc

    def test_audit_chains_round_trip(self):
        report = audit_tree_word(GOLDEN, 20000, maxlen=16, with_chains=True)
        assert report.chains
        for factor, chain in report.chains:
            if factor == "":
                assert chain == ()
                continue
            assert chain[0].factor == factor
            for r in chain:
                blk = CPRIME[r.block.label]
                assert r.x + apply(blk.morphism, r.antecedent) + r.y == r.factor
