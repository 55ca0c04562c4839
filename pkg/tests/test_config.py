import pytest

from kgprep.config import PipelineConfig, load_config, parse_config_text
from kgprep.errors import ConfigError


def test_parse_basic_keys(tmp_path):
    cfg_file = tmp_path / "p.cfg"
    cfg_file.write_text(
        "# comment\n"
        "inputs.triplets = data/drkg.tsv\n"
        "stages.dedup = true\n"
        "stages.audit = false\n"
        "fingerprint.radius = 3\n"
        "split.seeds = 0, 1, 2\n"
        "onsides.min_tier = medium\n"
        "drop.types = Tax,Symptom\n",
        encoding="utf-8",
    )
    config = load_config(cfg_file)
    assert config.triplets == str(tmp_path / "data/drkg.tsv")
    assert config.fingerprint_radius == 3
    assert config.split_seeds == [0, 1, 2]
    assert config.onsides_min_tier == "medium"
    assert config.drop_types == ["Tax", "Symptom"]


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text("inputs.banana = x\n")
    with pytest.raises(ConfigError, match="unknown stage"):
        parse_config_text("stages.banana = true\n")


def test_bad_values_rejected():
    with pytest.raises(ConfigError, match="boolean"):
        parse_config_text("stages.dedup = maybe\n")
    with pytest.raises(ConfigError, match="integer"):
        parse_config_text("fingerprint.radius = deep\n")
    with pytest.raises(ConfigError, match="key = value"):
        parse_config_text("just words\n")


def test_dependency_order_enforced():
    config = parse_config_text("stages.remap = false\nstages.dedup = true\n")
    with pytest.raises(ConfigError, match="dedup.*remap"):
        config.validate()
    config = parse_config_text("stages.smiles_filter = false\nstages.fingerprints = true\n")
    with pytest.raises(ConfigError, match="fingerprints.*smiles_filter"):
        config.validate()
    config = parse_config_text("stages.reactome = false\nstages.features = true\n")
    with pytest.raises(ConfigError, match="features.*reactome"):
        config.validate()


def test_enabled_stage_requires_its_input():
    config = PipelineConfig()
    config.stages["reactome"] = True
    config.reactome = None
    # other required inputs filled so only the reactome check can fire
    config.onsides = "x.tsv"
    config.smiles = "y.tsv"
    with pytest.raises(ConfigError, match="inputs.reactome"):
        config.validate()


def test_default_config_validates_with_inputs():
    config = PipelineConfig(
        reactome="r.tsv", onsides="o.tsv", smiles="s.tsv"
    )
    config.validate()


def test_tier_and_task_validation():
    config = PipelineConfig(reactome="r", onsides="o", smiles="s")
    config.onsides_min_tier = "shaky"
    with pytest.raises(ConfigError, match="min_tier"):
        config.validate()
    config = PipelineConfig(reactome="r", onsides="o", smiles="s")
    config.split_tasks = ["ppi", "alchemy"]
    with pytest.raises(ConfigError, match="alchemy"):
        config.validate()
