import numpy as np
import pytest

from cogsig.bayes import encode_cases, log_scores_batch, train_classifier
from cogsig.config import PRESET_EQUAL_WIDTH
from cogsig.features import build_case_table, concat_tables
from cogsig.model_io import model_from_json, model_to_json, report_from_json, report_to_json
from cogsig.bayes import run_evaluation
from cogsig.simulate import default_layout, default_profiles, default_script, generate_session


@pytest.fixture(scope="module")
def trained():
    a, b = default_profiles()
    layout = default_layout()
    script = default_script()
    table = concat_tables([
        build_case_table(generate_session(a, script, seed=51, user_id="user1"), layout, 0.01),
        build_case_table(generate_session(b, script, seed=52, user_id="user2"), layout, 0.01),
    ]).without_empty_rows()
    net = train_classifier(table, "equal-width", 10, 0.1, 1.0)
    return net, table


class TestModelDocument:
    def test_round_trip_preserves_structure_and_encoders(self, trained):
        net, _ = trained
        loaded = model_from_json(model_to_json(net, PRESET_EQUAL_WIDTH, default_layout()))
        assert loaded.net.structure == net.structure
        assert loaded.net.class_labels == net.class_labels
        assert loaded.config == PRESET_EQUAL_WIDTH
        assert loaded.layout == default_layout()
        assert set(loaded.net.encoders) == set(net.encoders)

    def test_classification_is_bit_reproducible(self, trained):
        net, table = trained
        loaded = model_from_json(model_to_json(net, PRESET_EQUAL_WIDTH, default_layout()))
        codes = encode_cases(net, table)
        again = encode_cases(loaded.net, table)
        assert np.array_equal(codes, again)
        assert np.array_equal(log_scores_batch(net, codes),
                              log_scores_batch(loaded.net, again))

    def test_version_check(self):
        with pytest.raises(ValueError, match="format version"):
            model_from_json('{"format_version": "bogus/9"}')

    def test_document_is_self_describing(self, trained):
        net, _ = trained
        text = model_to_json(net, PRESET_EQUAL_WIDTH, default_layout())
        import json
        doc = json.loads(text)
        for key in ("format_version", "config", "structure", "priors", "cpts",
                    "schemes", "class_labels", "log_base", "smoothing_alpha",
                    "layout"):
            assert key in doc


class TestReportDocument:
    def test_round_trip(self, trained):
        _, table = trained
        report = run_evaluation(table, PRESET_EQUAL_WIDTH)
        doc = report_from_json(report_to_json(report))
        assert doc["accuracy"] == report.accuracy
        assert doc["config"] == PRESET_EQUAL_WIDTH.to_dict()
        assert doc["confusion"] == report.confusion.tolist()

    def test_version_check(self):
        with pytest.raises(ValueError, match="format version"):
            report_from_json('{"format_version": "cogsig-model/1"}')
