import os

import pytest

from experimentConfig import CONFIG_MODELS, key_lines, load_config, parse_config
from labErrors import ConfigError

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")

FRAME_BOUNDS = """command = "frame-bounds"

[[relation]]
name = "schrodinger"

[domain]
t_max = 1.0

[[domain.rect]]
x0 = 0.5
x1 = 2.0
t0 = 0.1
t1 = 0.6

[frame-bounds]
N = 8
"""


def issues_of(text):
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    return e.value.issues


def test_minimal_frame_bounds_config():
    config = parse_config(FRAME_BOUNDS)
    assert config.command == "frame-bounds"
    assert config.section().N == 8
    assert config.frame_bounds.samples == 0
    assert [r.name for r in config.relations()] == ["schrodinger"]
    assert config.domain.build().area() == pytest.approx(0.75)


def test_echo_uses_the_file_names():
    echo = parse_config(FRAME_BOUNDS).echo()
    assert echo["frame-bounds"]["N"] == 8
    assert echo["relation"] == [{"name": "schrodinger"}]
    assert "output" not in echo


def test_reversed_rectangle_is_reported_on_its_table():
    issues = issues_of(FRAME_BOUNDS.replace("x1 = 2.0", "x1 = 0.25"))
    assert len(issues) == 1
    line, message = issues[0]
    assert line == 9
    assert "x0 < x1" in message
    assert message.startswith("domain.rect.0")


def test_missing_relation_parameter():
    text = FRAME_BOUNDS.replace('name = "schrodinger"', 'name = "gravity_capillary"\ng = 1.0\nS = 1.0')
    issues = issues_of(text)
    assert issues == [(3, "relation.0: missing key 'H' for relation 'gravity_capillary'")]


def test_parameter_of_another_family():
    issues = issues_of(FRAME_BOUNDS.replace('name = "schrodinger"', 'name = "schrodinger"\nc = 1.0'))
    assert issues == [(3, "relation.0: key 'c' does not apply to relation 'schrodinger'")]


def test_out_of_range_relation_parameter():
    text = FRAME_BOUNDS.replace('name = "schrodinger"', 'name = "gravity_capillary"\ng = 1.0\nS = 1.0\nH = -1.0')
    line, message = issues_of(text)[0]
    assert line == 3
    assert "positive depth" in message


def test_unknown_and_missing_keys():
    issues = issues_of(FRAME_BOUNDS.replace("N = 8", "Nn = 8"))
    assert (16, "unknown key 'frame-bounds.Nn'") in issues
    assert (15, "missing key 'frame-bounds.N'") in issues


def test_missing_domain():
    text = FRAME_BOUNDS.split("[domain]")[0] + "[frame-bounds]\nN = 8\n"
    assert issues_of(text) == [(None, "command 'frame-bounds' needs a [domain]")]


def test_domain_outside_the_box():
    line, message = issues_of(FRAME_BOUNDS.replace("t1 = 0.6", "t1 = 1.5"))[0]
    assert line == 6
    assert "ambient box" in message


def test_invalid_toml():
    issues = issues_of('command = "solve"\n[solve\nN = 1\n')
    assert len(issues) == 1
    assert issues[0][0] == 2
    assert issues[0][1].startswith("invalid TOML")


def test_unknown_command():
    issues = issues_of('\ncommand = "fly"\n')
    assert issues[0][0] == 2
    assert issues[0][1].startswith("unknown command 'fly'")


def test_missing_command():
    assert issues_of("[solve]\nN = 1\n") == [(None, "missing key 'command'")]


def test_duplicate_relation_names_need_labels():
    text = 'command = "dispersion-check"\n[[relation]]\nname = "schrodinger"\n[[relation]]\nname = "schrodinger"\n'
    assert "distinct names" in issues_of(text)[0][1]

    config = parse_config(text + 'label = "second"\n')
    assert [r.name for r in config.relations()] == ["schrodinger", "second"]


def test_check_lists_follow_the_relations():
    text = 'command = "dispersion-check"\n[[relation]]\nname = "schrodinger"\n[checks]\nverdicts = ["SUPERLINEAR", "SUPERLINEAR"]\n'
    assert "one entry per relation" in issues_of(text)[0][1]


def test_lattice_radii_are_bounded_by_the_truncation():
    text = 'command = "lattice-count"\n[[relation]]\nname = "schrodinger"\n[lattice-count]\nN = 64\nradii = [10.0, 40.0]\n'
    line, message = issues_of(text)[0]
    assert line == 4
    assert "N/4" in message


def test_water_wave_commands_take_no_relation():
    text = 'command = "dn"\n[[relation]]\nname = "schrodinger"\n[dn]\ngrids = [32, 64]\nH = 1.0\n'
    assert issues_of(text) == [(None, "command 'dn' takes no [[relation]]")]


def test_key_lines_number_repeated_tables():
    lines = key_lines('command = "x"\n[[relation]]\nname = "a"\n\n[[relation]]\n# note\nname = "b"\n[dn]\nH = 1\n')
    assert lines[("command",)] == 1
    assert lines[("relation", 0)] == 2
    assert lines[("relation", 1, "name")] == 7
    assert lines[("dn", "H")] == 9


@pytest.mark.parametrize("name", sorted(os.listdir(CONFIG_DIR)))
def test_shipped_configs_parse(name):
    config = load_config(os.path.join(CONFIG_DIR, name))
    assert type(config) is CONFIG_MODELS[config.command]
