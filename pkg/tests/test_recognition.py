import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rescueaid.groups import NUM_GROUPS, ComplicationGroup, VitalKind
from rescueaid.recognition import (
    ComplicationDistribution,
    DEFAULT_PROFILES,
    FeatureSchema,
    Layer,
    MlpModel,
    SchemaMismatchError,
    TrainingConfig,
    VitalSlot,
    assemble_features,
    classify,
    evaluate,
    forward,
    generate_synthetic_cases,
    gradient_check,
    init_model,
    train,
)
from rescueaid.case_data.encoding import EncodingScheme
from rescueaid.case_data.tfidf import fit_tfidf
from rescueaid.recognition.network import softmax


def vitals_only_schema():
    return FeatureSchema(
        schema_id="s-test",
        vitals=[
            VitalSlot(VitalKind.SPO2, 50.0, 100.0),
            VitalSlot(VitalKind.HEART_RATE, 20.0, 220.0),
        ],
    )


class TestAssembleFeatures:
    def test_spo2_95_normalizes_to_090(self):
        schema = vitals_only_schema()
        vector = assemble_features({VitalKind.SPO2: 95.0}, {}, EncodingScheme(), None, schema)
        assert vector.values[0] == pytest.approx(0.90)
        assert vector.values[1] == 0.0  # present

    def test_all_missing_gives_half_fills_and_raised_flags(self):
        schema = vitals_only_schema()
        vector = assemble_features({}, {}, EncodingScheme(), None, schema)
        assert vector.values.tolist() == [0.5, 1.0, 0.5, 1.0]

    def test_full_toy_snapshot_matches_hand_concatenation(self):
        scheme = EncodingScheme(
            categorical_maps={"walking": {"no": 0, "yes": 1}},
            one_hot_vocabs={"walking": ["no", "yes"]},
        )
        tfidf = fit_tfidf(["chest pain", "fall injury"])
        schema = FeatureSchema(
            schema_id="s-toy",
            vitals=[VitalSlot(VitalKind.SPO2, 50.0, 100.0)],
            one_hot_attrs=["walking"],
            one_hot_vocabs={"walking": ["no", "yes"]},
            text_attrs=["notes"],
            tfidf_terms=tfidf.top_terms_by_idf(4),
        )
        vector = assemble_features(
            {VitalKind.SPO2: 75.0},
            {"walking": "yes", "notes": "chest pain"},
            scheme,
            tfidf,
            schema,
        )
        from rescueaid.case_data.tfidf import transform_tfidf

        weights = transform_tfidf("chest pain", tfidf)
        expected = [0.5, 0.0, 0.0, 1.0] + [weights.get(t, 0.0) for t in schema.tfidf_terms]
        assert vector.values.tolist() == pytest.approx(expected)
        assert vector.values.shape[0] == schema.dimension

    def test_values_clamped_into_unit_interval(self):
        schema = vitals_only_schema()
        vector = assemble_features({VitalKind.SPO2: 130.0, VitalKind.HEART_RATE: 5.0}, {}, EncodingScheme(), None, schema)
        assert vector.values[0] == 1.0
        assert vector.values[2] == 0.0

    def test_scheme_schema_mismatch_is_an_error(self):
        schema = FeatureSchema(
            schema_id="s-bad",
            one_hot_attrs=["walking"],
            one_hot_vocabs={"walking": ["no", "yes"]},
        )
        with pytest.raises(SchemaMismatchError):
            assemble_features({}, {}, EncodingScheme(), None, schema)


class TestForward:
    def test_zero_model_gives_uniform_distribution(self):
        model = MlpModel(
            layers=[Layer(np.zeros((4, NUM_GROUPS)), np.zeros(NUM_GROUPS), "softmax")]
        )
        out = forward(model, np.zeros(4))
        assert out == pytest.approx([0.1] * NUM_GROUPS)

    def test_softmax_shift_invariance(self):
        rng = np.random.default_rng(3)
        logits = rng.normal(size=NUM_GROUPS)
        assert softmax(logits) == pytest.approx(softmax(logits + 7.3), abs=1e-12)

    def test_two_layer_toy_model_matches_hand_matrix_multiply(self):
        w1 = np.array([[1.0, -1.0], [0.5, 2.0]])
        b1 = np.array([0.1, -0.2])
        w2 = np.array([[1.0, 0.0], [0.0, 1.0]])
        b2 = np.array([0.0, 0.5])
        model = MlpModel(layers=[Layer(w1, b1, "relu"), Layer(w2, b2, "softmax")])
        x = np.array([0.3, 0.7])

        hidden = np.maximum(x @ w1 + b1, 0.0)
        logits = hidden @ w2 + b2
        exp = np.exp(logits - logits.max())
        assert forward(model, x) == pytest.approx(exp / exp.sum(), abs=1e-12)

    def test_non_finite_input_rejected(self):
        model = init_model(3, [4], seed=1)
        with pytest.raises(ValueError):
            forward(model, np.array([1.0, np.nan, 0.0]))

    def test_bias_shift_keeps_argmax(self):
        model = init_model(5, [8], seed=2)
        x = np.random.default_rng(5).normal(size=5)
        before = np.argmax(forward(model, x))
        model.layers[-1].bias += 3.25
        after = np.argmax(forward(model, x))
        assert before == after

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=6, max_size=6))
    def test_output_is_probability_vector_for_arbitrary_finite_input(self, values):
        model = init_model(6, [8], seed=11)
        out = forward(model, np.array(values))
        assert abs(out.sum() - 1.0) <= 1e-9
        assert np.all(out >= 0.0) and np.all(out <= 1.0)


class TestDistribution:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            ComplicationDistribution(probabilities=np.full(NUM_GROUPS, 0.2))
        ComplicationDistribution(probabilities=np.full(NUM_GROUPS, 0.1))

    def test_uniform_entropy_closed_form(self):
        dist = ComplicationDistribution(probabilities=np.full(NUM_GROUPS, 0.1))
        assert dist.entropy() == pytest.approx(np.log(10), abs=1e-12)

    def test_argmax_tie_breaks_to_lowest_ordinal(self):
        probs = np.full(NUM_GROUPS, 0.05)
        probs[2] = probs[3] = 0.30
        dist = ComplicationDistribution(probabilities=probs)
        assert dist.argmax_group() is ComplicationGroup.CARDIOVASCULAR

    def test_classify_requires_ten_outputs(self):
        model = init_model(4, [4], output_dim=3, seed=0)
        with pytest.raises(ValueError):
            classify(model, np.zeros(4))


class TestGradientCheck:
    def test_small_random_model_below_1e4(self):
        model = init_model(6, [8, 5], seed=42)
        x = np.random.default_rng(7).normal(size=6)
        assert gradient_check(model, x, label=3) < 1e-4

    def test_single_layer_softmax_below_1e6(self):
        model = init_model(5, [], seed=9)
        x = np.random.default_rng(8).normal(size=5)
        assert gradient_check(model, x, label=1) < 1e-6

    def test_zero_input_sample_is_finite(self):
        model = init_model(4, [6], seed=5)
        assert np.isfinite(gradient_check(model, np.zeros(4), label=0))


def separable_toy_set(n=200, seed=0):
    """Two clouds split by the hand-placed boundary x0 + x1 = 1."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, size=(n, 2))
    y = (x[:, 0] + x[:, 1] > 1.0).astype(np.int64)
    keep = np.abs(x[:, 0] + x[:, 1] - 1.0) > 0.1  # margin so the oracle is unambiguous
    return x[keep], y[keep]


class TestTrain:
    def test_linearly_separable_toy_reaches_95_percent(self):
        x, y = separable_toy_set(400, seed=1)
        config = TrainingConfig(hidden_layout=[16], learning_rate=0.5, epochs=200, batch_size=32, seed=3)
        model = init_model(2, config.hidden_layout, seed=config.seed)
        from rescueaid.recognition.training import split_dataset

        tx, ty, vx, vy = split_dataset(x, y, config.validation_split, config.seed)
        trained, history = train(model, tx, ty, config)
        predictions = np.argmax(forward(trained, vx), axis=1)
        assert (predictions == vy).mean() >= 0.95
        assert history[-1] < history[0]

    def test_zero_learning_rate_leaves_parameters_bit_identical(self):
        x, y = separable_toy_set(50, seed=2)
        config = TrainingConfig(hidden_layout=[4], learning_rate=0.0, epochs=3, batch_size=16, seed=1)
        model = init_model(2, [4], seed=1)
        trained, _ = train(model, x, y, config)
        for before, after in zip(model.layers, trained.layers):
            assert np.array_equal(before.weights, after.weights)
            assert np.array_equal(before.bias, after.bias)

    def test_same_seed_gives_identical_history_and_parameters(self):
        x, y = separable_toy_set(100, seed=3)
        config = TrainingConfig(hidden_layout=[8], learning_rate=0.2, epochs=5, batch_size=16, seed=7)
        model = init_model(2, [8], seed=7)
        first, history1 = train(model, x, y, config)
        second, history2 = train(model, x, y, config)
        assert history1 == history2
        for a, b in zip(first.layers, second.layers):
            assert np.array_equal(a.weights, b.weights)
            assert np.array_equal(a.bias, b.bias)


class TestSynthetic:
    def test_zero_records_is_empty_table(self):
        table = generate_synthetic_cases(DEFAULT_PROFILES, 0, seed=1)
        assert len(table) == 0
        assert "case_id" in table.columns

    def test_same_seed_twice_identical(self):
        a = generate_synthetic_cases(DEFAULT_PROFILES, 50, seed=9)
        b = generate_synthetic_cases(DEFAULT_PROFILES, 50, seed=9)
        assert a.rows == b.rows

    def test_group_means_within_three_standard_errors(self):
        per_group = 1000
        table = generate_synthetic_cases(DEFAULT_PROFILES, per_group * len(DEFAULT_PROFILES), seed=123)
        for offset, profile in enumerate(DEFAULT_PROFILES):
            rows = table.rows[offset :: len(DEFAULT_PROFILES)]
            assert len(rows) == per_group
            for kind, (mean, sd) in profile.vitals.items():
                values = np.array([row[kind.value] for row in rows])
                standard_error = sd / np.sqrt(per_group)
                assert abs(values.mean() - mean) < 3 * standard_error, kind


class TestEvaluate:
    def test_perfect_predictor_diagonal_confusion(self):
        # single softmax layer rigged to copy a one-hot input
        model = MlpModel(layers=[Layer(np.eye(NUM_GROUPS) * 50.0, np.zeros(NUM_GROUPS), "softmax")])
        y = np.arange(NUM_GROUPS, dtype=np.int64)
        x = np.eye(NUM_GROUPS)
        report = evaluate(model, x, y)
        assert report.accuracy == 1.0
        assert np.array_equal(report.confusion, np.eye(NUM_GROUPS, dtype=np.int64))

    def test_uniform_random_predictor_near_chance(self):
        rng = np.random.default_rng(0)
        n = 10_000
        x = rng.normal(size=(n, NUM_GROUPS))
        y = np.repeat(np.arange(NUM_GROUPS), n // NUM_GROUPS)
        model = init_model(NUM_GROUPS, [16], seed=0)
        report = evaluate(model, x, y)
        assert abs(report.accuracy - 0.1) < 0.03

    def test_toy_confusion_matches_hand_count(self):
        model = MlpModel(layers=[Layer(np.eye(NUM_GROUPS) * 50.0, np.zeros(NUM_GROUPS), "softmax")])
        x = np.eye(NUM_GROUPS)[[0, 0, 1, 2, 2]]
        y = np.array([0, 1, 1, 2, 0])
        report = evaluate(model, x, y)
        assert report.confusion[0, 0] == 1
        assert report.confusion[1, 0] == 1
        assert report.confusion[1, 1] == 1
        assert report.confusion[2, 2] == 1
        assert report.confusion[0, 2] == 1
        assert report.support == list(np.bincount(y, minlength=NUM_GROUPS))

    def test_empty_dataset_is_error(self):
        model = init_model(3, [4], seed=0)
        with pytest.raises(ValueError):
            evaluate(model, np.zeros((0, 3)), np.zeros(0, dtype=np.int64))
