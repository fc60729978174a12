from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.specs import registry
from selfsim_cli.symbolic import groups
from selfsim_cli.symbolic import ifs as ifs_mod


def _plane(
    backend: scalar.Backend,
    rotation: scalar.ScalarLike,
    *,
    reflect: bool = False,
) -> ifs_mod.IfsSystem:
    return ifs_mod.make_system(
        [
            similarity.build(backend, "1/2", ["1/4", "1/4"], rotation=rotation),
            similarity.build(backend, "1/2", ["1/2", "1/2"], reflect=reflect),
        ],
    )


def test_identity_orthogonal_parts() -> None:
    analysis = groups.orthogonal_group_analysis(registry.resolve("four-corner"))
    assert analysis.verdict == "finite"
    assert analysis.order == 1


def test_quarter_turns_generate_a_cyclic_group() -> None:
    analysis = groups.orthogonal_group_analysis(_plane(scalar.EXACT, 90))
    assert analysis.verdict == "finite"
    assert analysis.order == 4
    assert analysis.rotations == 4


def test_quarter_turn_and_reflection_generate_a_dihedral_group() -> None:
    analysis = groups.orthogonal_group_analysis(_plane(scalar.EXACT, 90, reflect=True))
    assert analysis.order == 8
    assert analysis.rotations == 4


def test_float_angles_fold_onto_a_finite_group() -> None:
    analysis = groups.orthogonal_group_analysis(_plane(scalar.floating(30), 45))
    assert analysis.verdict == "finite"
    assert analysis.order == 8


def test_irrational_angle_is_dense() -> None:
    # one radian
    system = _plane(scalar.floating(30), "57.295779513082320876798154814105")
    analysis = groups.orthogonal_group_analysis(system, max_elements=200)
    assert analysis.verdict == "dense"
    assert analysis.order is None
