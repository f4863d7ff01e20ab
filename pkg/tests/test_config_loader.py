import pytest
from pydantic import ValidationError

from config_loader import ConfigError, load_config, read_config_values


@pytest.fixture
def config_file(tmp_path):
    def write(text: str) -> str:
        path = tmp_path / "run.conf"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv("HGS_OUTPUT_DIR", raising=False)
    monkeypatch.delenv("HGS_WORKERS", raising=False)


def test_empty_file_gives_defaults(config_file):
    config = load_config(config_file(""))
    assert config.beta == 0.5
    assert config.alpha == 1.0
    assert config.grid == "100x100"
    assert config.workers == 1
    assert config.output_dir == "output"


def test_file_values_are_typed(config_file):
    path = config_file("# hexagonal point\nbeta = 0.3\nrho = 0.5\nkappa = 0.4\nsave = true\ngrid = \"40x40x5\"\n")
    config = load_config(path)
    assert (config.beta, config.rho, config.kappa) == (0.3, 0.5, 0.4)
    assert config.save is True
    assert config.grid_counts() == [40, 40, 5]


def test_flags_override_the_file(config_file):
    path = config_file("beta = 0.5\nalpha = 2.0\n")
    config = load_config(path, {"beta": 0.6, "alpha": None})
    assert config.beta == 0.6
    assert config.alpha == 2.0


def test_dashed_keys_are_normalized(config_file):
    assert read_config_values(config_file("epsilon-ratio = 0.98\n")) == {"epsilon_ratio": "0.98"}


def test_environment_sits_between_file_and_flags(config_file, monkeypatch):
    monkeypatch.setenv("HGS_WORKERS", "3")
    monkeypatch.setenv("HGS_OUTPUT_DIR", "/tmp/hgs")
    path = config_file("workers = 2\n")
    assert load_config(path).workers == 3
    assert load_config(path, {"workers": 4}).workers == 4
    assert load_config().output_dir == "/tmp/hgs"


@pytest.mark.parametrize("text", ["kappa = 1.0\n", "beta = 0\n", "colour = red\n", "grid = 10by10\n"])
def test_invalid_values_are_rejected(config_file, text):
    with pytest.raises(ValidationError):
        load_config(config_file(text))


def test_unparsable_line_reports_its_number(config_file):
    with pytest.raises(ConfigError) as raised:
        load_config(config_file("beta = 0.5\nthis is not a setting\n"))
    assert raised.value.line_number == 2


def test_key_without_value_is_an_error(config_file):
    with pytest.raises(ConfigError) as raised:
        read_config_values(config_file("alpha = 1.0\nquick\n"))
    assert raised.value.line_number == 2


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError) as raised:
        read_config_values(str(tmp_path / "absent.conf"))
    assert isinstance(raised.value.original_error, OSError)
