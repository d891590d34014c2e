import numpy as np
import pytest

from popsize_lab.problems import (AmbiguousBuildingBlockError,
                                  InvalidGenomeError, PartitionLayout,
                                  Subfunction, bb_count, bits_to_configs,
                                  configs_to_bits, custom_problem, evaluate,
                                  genome_from_string, onemax, parse_problem,
                                  subfunction_stats, trap4)


def brute_force_fitness(problem, bits):
    """Oracle: explicit per-partition table lookup, no vectorization."""
    total = 0.0
    for i in range(problem.m):
        block = bits[i * problem.k:(i + 1) * problem.k]
        config = int("".join(str(int(b)) for b in block), 2)
        total += problem.subfunction.table[config]
    return total


def test_onemax_example():
    assert evaluate(onemax(6), genome_from_string("101101")) == 4


def test_trap4_values():
    prob = trap4(1)
    assert evaluate(prob, genome_from_string("1111")) == 4
    assert evaluate(prob, genome_from_string("0000")) == 3
    assert evaluate(prob, genome_from_string("0111")) == 0
    assert evaluate(trap4(2), genome_from_string("11110000")) == 7


def test_bit_order_msb_first():
    # leftmost bit of the partition is the most significant digit
    layout = PartitionLayout(m=1, k=4)
    assert bits_to_configs(genome_from_string("1111"), layout) == 15
    assert bits_to_configs(genome_from_string("1000"), layout) == 8
    assert np.array_equal(configs_to_bits(np.array([9]), layout),
                          genome_from_string("1001"))


def test_length_mismatch_rejected():
    with pytest.raises(InvalidGenomeError):
        evaluate(onemax(6), genome_from_string("10110"))


@pytest.mark.parametrize("maker,length", [
    (lambda: onemax(16), 16),
    (lambda: trap4(4), 16),
    (lambda: custom_problem(3, 2, 2, [0.5, 1.0, 3.0, 2.0]), 6),
])
def test_evaluate_matches_brute_force(maker, length):
    problem = maker()
    rng = np.random.default_rng(7)
    for _ in range(50):
        bits = rng.integers(0, 2, length, dtype=np.uint8)
        assert evaluate(problem, bits) == pytest.approx(
            brute_force_fitness(problem, bits), abs=1e-12)


def test_evaluate_pure():
    prob = trap4(3)
    g = genome_from_string("110100101111")
    assert evaluate(prob, g) == evaluate(prob, g.copy())


class TestSubfunctionStats:
    def test_onemax_bit(self):
        stats = subfunction_stats(Subfunction((0.0, 1.0), 1))
        assert stats.d == 1.0
        assert stats.sigma_bb_sq == pytest.approx(0.25, abs=1e-12)
        assert stats.competitor_index == 0

    def test_trap4_matches_enumeration(self):
        sub = trap4(1).subfunction
        stats = subfunction_stats(sub)
        # oracle: enumerate the 16 configurations directly
        values = [sub.table[c] for c in range(16)]
        mean = sum(values) / 16
        var = sum((v - mean) ** 2 for v in values) / 16
        assert stats.sigma_bb_sq == pytest.approx(var, abs=1e-12)
        assert stats.sigma_bb_sq == pytest.approx(1.21484375, abs=1e-12)
        assert stats.d == 1.0
        assert stats.competitor_index == 0  # u=0 scores 3

    def test_constant_table_is_ambiguous(self):
        with pytest.raises(AmbiguousBuildingBlockError):
            subfunction_stats(Subfunction((1.0, 1.0, 1.0, 1.0), 2))

    def test_competitor_tie_takes_lowest_encoding(self):
        stats = subfunction_stats(Subfunction((2.0, 5.0, 2.0, 1.0), 1))
        assert stats.competitor_index == 0
        assert stats.d == 3.0


class TestBBCount:
    def test_full_propagation(self):
        prob = onemax(8)
        configs = np.ones((4, 8), dtype=np.int64)
        for j in range(8):
            assert bb_count(prob, configs, j) == 4

    def test_mixed_population(self):
        prob = trap4(2)
        configs = bits_to_configs(
            np.array([genome_from_string("11111111"),
                      genome_from_string("00000000")]), prob.layout)
        assert bb_count(prob, configs, 0) == 1

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            bb_count(onemax(4), np.zeros((2, 4), dtype=np.int64), 4)

    def test_random_population_mean_near_supply(self):
        # binomial(n, 1/16) mean: n / 2^k
        prob = trap4(80)
        rng = np.random.default_rng(11)
        totals = []
        for _ in range(20):
            configs = rng.integers(0, 16, (1600, 80), dtype=np.int64)
            totals.append(np.mean([bb_count(prob, configs, j)
                                   for j in range(80)]))
        assert np.mean(totals) == pytest.approx(100, rel=0.02)

    def test_present_plus_absent_is_n(self):
        prob = trap4(5)
        rng = np.random.default_rng(3)
        configs = rng.integers(0, 16, (30, 5), dtype=np.int64)
        for j in range(5):
            present = bb_count(prob, configs, j)
            absent = np.count_nonzero(configs[:, j] != prob.bb_index)
            assert present + absent == 30


def test_parse_problem_file():
    text = "2 2\n3\n0.0 1.0 2.0 9.0\n"
    prob = parse_problem(text)
    assert (prob.m, prob.k, prob.bb_index) == (2, 2, 3)
    assert evaluate(prob, genome_from_string("1111")) == 18.0


def test_parse_problem_errors():
    with pytest.raises(ValueError):
        parse_problem("2 2\n3\n0 1 2\n")  # wrong table size
    with pytest.raises(ValueError):
        parse_problem("just one line")
