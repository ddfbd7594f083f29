import json

import pytest

from app.base.controllers.base_controllers import BaseController
from app.cli.models.run_config import RunConfig
from app.core.exceptions import ValidationError
from app.reduced.requests.reduce_request import FindRequest, StildeRequest
from app.so3.requests.so3_request import CategoryRequest, MatrixRequest
from app.so3.responses.so3_response import CriticalSetResponse
from app.verify.requests.verify_request import VerifyRequest


class TestRunConfig:
    """Test cases for the global flags"""

    @pytest.mark.parametrize(
        "flags,where",
        [
            ({"quad_radial": 1}, "quad_radial"),
            ({"quad_sphere": 0}, "quad_sphere"),
            ({"quad_tol": 1.5}, "quad_tol"),
            ({"mc_samples": -1}, "mc_samples"),
            ({"seed": -3}, "seed"),
            ({"fmt": "xml"}, "fmt"),
        ],
    )
    def test_rejects_bad_flags(self, flags, where):
        with pytest.raises(ValidationError, match=f"Invalid {where}"):
            RunConfig.from_flags(**flags)

    def test_quadrature_overrides(self):
        # Arrange
        config = RunConfig.from_flags(quad_radial=6, quad_sphere=4, quad_tol=1e-3, mc_samples=500, seed=7)

        # Act
        spec = config.quadrature_spec()

        # Assert
        assert spec.radial_order == 6
        assert spec.psi_order == 4
        assert spec.theta_order == 4
        assert spec.target_rel_tol == pytest.approx(1e-3)
        assert spec.mc_samples == 500
        assert spec.seed == 7

    def test_defaults(self):
        # Act
        config = RunConfig.from_flags()

        # Assert
        assert config.output_format() == "json"
        assert config.output_format("csv") == "csv"
        assert config.effective_seed == config.search.seed

    def test_seeded_rng(self):
        # Arrange
        config = RunConfig.from_flags(seed=3)

        # Act & Assert
        assert config.rng().integers(1000) == config.rng().integers(1000)


class TestBaseController:
    """Test cases for output formatting"""

    def test_unknown_format(self):
        with pytest.raises(ValidationError, match="Unknown output format"):
            BaseController(fmt="xml")

    def test_csv_to_file(self, tmp_path):
        # Arrange
        path = tmp_path / "out" / "table.csv"
        controller = BaseController(out=str(path), fmt="csv")

        # Act
        controller.emit_csv(["a", "b"], [[1.5, None], [2, "x"]])

        # Assert
        assert path.read_text(encoding="utf-8") == "a,b\n1.5,\n2,x\n"

    def test_text_table(self, capsys):
        # Arrange
        controller = BaseController(fmt="text")

        # Act
        controller.emit_table(["value", "index"], [[8.0, 3], [-6.0, None]])

        # Assert
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["value  index", "    8      3", "   -6      -"]

    def test_json_document(self, capsys):
        # Arrange
        controller = BaseController(fmt="json")
        response = CriticalSetResponse(M=[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], det=1.0, route="eigen", critical=[])

        # Act
        controller.emit_document(response, ["value"], [])

        # Assert
        document = json.loads(capsys.readouterr().out)
        assert document["schema_version"] == "1.0"
        assert document["route"] == "eigen"


class TestRequests:
    """Test cases for request parsing"""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("diag:5,2,1", [[5.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]),
            ("eye", [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            ("1 2 3 4 5 6 7 8 9", [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]),
        ],
    )
    def test_matrix_forms(self, text, expected):
        assert MatrixRequest.parse(M=text).M == expected

    def test_matrix_from_file(self, tmp_path):
        # Arrange
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"M": [[2, 0, 0], [0, 3, 0], [0, 0, 4]]}), encoding="utf-8")

        # Act
        request = MatrixRequest.parse(M=str(path))

        # Assert
        assert request.M[2][2] == 4.0

    def test_matrix_wrong_count(self):
        with pytest.raises(ValidationError, match="M needs 9 values"):
            MatrixRequest.parse(M="1 2 3")

    def test_category_eta_positive(self):
        with pytest.raises(ValidationError, match="Invalid eta"):
            CategoryRequest.parse(M="eye", eta=-1.0)

    def test_strategy_spelling(self):
        # Act
        request = FindRequest.parse(spec_file="spec.json", eps=0.01, strategy="all-fibers", window="0.5,0.01,0.2,0.1")

        # Assert
        assert request.strategy == "all_fibers"
        assert request.window == [0.5, 0.01, 0.2, 0.1]

    def test_window_length(self):
        with pytest.raises(ValidationError, match="window needs 4 values"):
            FindRequest.parse(spec_file="spec.json", eps=0.01, window="0.5,0.01,0.2")

    def test_point_length(self):
        with pytest.raises(ValidationError, match="p0 needs 4 values"):
            StildeRequest.parse(spec_file="spec.json", p0="0,0", eps=0.01)

    def test_verify_only_split(self):
        # Act
        request = VerifyRequest.parse(only=["F0,so3_tables", " descent "])

        # Assert
        assert request.only == ["F0", "so3_tables", "descent"]
        assert VerifyRequest.parse(only=[]).only is None
