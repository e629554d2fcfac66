from __future__ import annotations

from pathlib import Path

import pytest

from core.config.configuration import AppDefaults, Config, flat_key
from core.config.environment_setup import EnvironmentSetup
from core.enums.blowup_policy import BlowUpPolicy
from core.enums.log_level import LogLevel
from core.enums.system_kind import SystemKind
from core.util.app_paths import AppPaths
from core.util.logger import Logger
from core.util.validator import ConfigValidator

TOML = """
[logging]
console_output = false
level = "ERROR"

[integrator]
rel_tol = 1e-9
blowup_policy = "abort"

[run]
threads = 1
"""


def _project(tmp_path: Path, env: str | None = None) -> Path:
    (tmp_path / "config.toml").write_text(TOML, encoding="utf-8")
    if env is not None:
        (tmp_path / ".env").write_text(env, encoding="utf-8")
    return tmp_path


def test_environment_setup_uses_project_root_not_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    setup = EnvironmentSetup()

    assert setup.project_root == AppPaths.project_root()
    assert setup.toml_path == AppPaths.config_path()
    assert setup.toml_path.exists()


def test_toml_sections_are_flattened(tmp_path):
    config = EnvironmentSetup(root=_project(tmp_path)).load()

    assert config["INTEGRATOR_REL_TOL"] == 1e-9
    assert config["INTEGRATOR_BLOWUP_POLICY"] == "abort"
    assert config["RUN_THREADS"] == 1
    assert config["LOGGING_LEVEL"] == "ERROR"


def test_env_overrides_only_known_keys(tmp_path, monkeypatch):
    monkeypatch.setenv("INTEGRATOR_REL_TOL", "1e-7")
    monkeypatch.setenv("RUN_THREADS", "4")
    monkeypatch.setenv("INTEGRATOR_BLOWUP_POLICY", "drop")
    monkeypatch.setenv("ATTRACTOR_LAB_UNRELATED", "ignored")

    config = EnvironmentSetup(root=_project(tmp_path, env="# overrides come from the environment\n")).load()

    assert config["INTEGRATOR_REL_TOL"] == pytest.approx(1e-7)
    assert config["RUN_THREADS"] == 4
    assert config["INTEGRATOR_BLOWUP_POLICY"] is BlowUpPolicy.DROP
    assert "ATTRACTOR_LAB_UNRELATED" not in config


def test_missing_toml_gives_empty_configuration(tmp_path):
    assert EnvironmentSetup(root=tmp_path).load() == {}


def test_logging_table_configures_logger(tmp_path):
    EnvironmentSetup(root=_project(tmp_path))

    assert Logger.LEVEL is LogLevel.ERROR
    assert Logger.CONSOLE_OUTPUT_ENABLED is False
    assert Logger.PERSISTENCE_LOGGING is False


def test_config_singleton_loads_project_defaults(reset_config):
    first = Config.get()

    assert first is Config.get()
    assert first.get("INTEGRATOR_METHOD") == "DOP853"
    assert first.get("NOT_A_KEY", "fallback") == "fallback"

    Config.reset()
    assert Config.get() is not first


def test_defaults_are_looked_up_by_section_and_key():
    defaults = AppDefaults.wrap({"INTEGRATOR_REL_TOL": 1e-7, "RUN_THREADS": 2})

    assert defaults.value("integrator", "rel_tol", 1e-9) == 1e-7
    assert defaults.value("run", "threads") == 2
    assert defaults.value("pullback", "tol", 1e-3) == 1e-3
    assert AppDefaults.wrap(defaults) is defaults
    assert AppDefaults.wrap(None) == {}
    assert flat_key("sampling", "points_1d") == "SAMPLING_POINTS_1D"


def test_project_defaults_read_by_section(reset_config):
    defaults = Config.get()

    assert defaults.value("integrator", "method") == "DOP853"
    assert defaults.value("pullback", "consecutive_required") == 2
    assert defaults.value("nse", "kmax") == 8
    assert defaults.value("app", "name") == "Attractor Lab"


def test_logger_appends_to_file_when_persistence_is_enabled(tmp_path):
    Logger.configure(level=LogLevel.INFO, console_output=False, persistence_logging=True, log_dir=tmp_path)

    Logger.info("sweep finished", tag="test")
    Logger.debug("hidden below level", tag="test")

    text = (tmp_path / Logger.log_file_name).read_text(encoding="utf-8")
    assert "[INFO] [test] sweep finished" in text
    assert "hidden below level" not in text


def test_resolve_output_dir_relative_to_base(tmp_path):
    assert AppPaths.resolve_output_dir("out", tmp_path) == (tmp_path / "out").resolve()
    assert AppPaths.resolve_output_dir(tmp_path / "abs", Path("/elsewhere")) == (tmp_path / "abs").resolve()
    assert AppPaths.resolve_output_dir("", tmp_path) == (tmp_path / AppPaths.DEFAULT_OUTPUT_DIRNAME).resolve()


def test_resolve_output_dir_defaults_to_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    assert AppPaths.resolve_output_dir("runs") == (tmp_path / "runs").resolve()


def test_config_and_env_paths_follow_root(tmp_path):
    setup = EnvironmentSetup(root=_project(tmp_path))

    assert setup.toml_path == AppPaths.config_path(root=tmp_path) == (tmp_path / "config.toml").resolve()
    assert setup.env_path == AppPaths.env_path(root=tmp_path)
    assert AppPaths.env_path() == AppPaths.project_root() / ".env"


@pytest.mark.parametrize(
    "check, value",
    [
        (ConfigValidator.ensure_positive_int, 0),
        (ConfigValidator.ensure_positive_int, 1.5),
        (ConfigValidator.ensure_positive_int, True),
        (ConfigValidator.ensure_nonnegative_int, -1),
        (ConfigValidator.ensure_finite_float, float("nan")),
        (ConfigValidator.ensure_finite_float, "abc"),
        (ConfigValidator.ensure_positive_float, 0.0),
        (ConfigValidator.ensure_nonnegative_float, -1e-9),
        (ConfigValidator.ensure_unit_interval, 1.0),
        (ConfigValidator.ensure_boolean, "maybe"),
        (ConfigValidator.ensure_strictly_increasing, [1.0, 1.0]),
        (ConfigValidator.ensure_strictly_increasing, []),
    ],
)
def test_validator_rejects(check, value):
    with pytest.raises(ValueError):
        check(value, "field")


def test_validator_accepts_and_casts():
    v = ConfigValidator
    assert v.ensure_positive_int("3") == 3
    assert v.ensure_unit_interval("1e-9") == 1e-9
    assert v.ensure_boolean("on") is True
    assert v.ensure_strictly_increasing([0, 1.5]) == (0.0, 1.5)
    assert v.parse_log_level("warning") is LogLevel.WARNING
    assert v.parse_system_kind(" Lorenz_Auto ") is SystemKind.LORENZ_AUTO
    assert v.parse_blowup_policy("DROP") is BlowUpPolicy.DROP


def test_validator_names_the_field():
    with pytest.raises(ValueError, match="uniform.s_points"):
        ConfigValidator.ensure_positive_int(-2, "uniform.s_points")
    with pytest.raises(ValueError):
        ConfigValidator.parse_system_kind("duffing")
