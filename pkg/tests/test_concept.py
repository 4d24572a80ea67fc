"""Panel semantics: what a cell shows and what a hop does."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopmaze.concept import affordable, describe_state, enumerate_moves, transition
from hopmaze.core import Direction, HintSymbol, Move, Position
from hopmaze.mazegen import GenConfig, generate_maze
from hopmaze.reference import reference_maze

L, U, R, D = Direction.LEFT, Direction.UP, Direction.RIGHT, Direction.DOWN


class TestDescribeState:
    """Hand-checked panels on the fixed reference maze."""

    def test_start_panel(self):
        desc = describe_state(reference_maze(), Position(0, 3))
        assert desc.wall_dist == {U: 1, R: 5, D: 1}
        assert desc.crossing_dist == {R: 2}
        assert desc.goal_offset == (7, 2)
        assert desc.hint is HintSymbol.TRIANGLE  # junction pointing right

    def test_pre_goal_junction_panel(self):
        desc = describe_state(reference_maze(), Position(7, 4))
        assert desc.wall_dist == {L: 2, U: 1, D: 2}
        assert desc.crossing_dist == {L: 1, D: 1}
        assert desc.goal_offset == (0, 1)
        assert desc.hint is HintSymbol.PENTAGON  # junction pointing down

    def test_branch_junction_panel(self):
        desc = describe_state(reference_maze(), Position(5, 5))
        assert desc.wall_dist == {U: 2, R: 2, D: 2}
        assert desc.crossing_dist == {U: 1, R: 1}
        assert desc.goal_offset == (2, 0)
        assert desc.hint is HintSymbol.CIRCLE  # points back up at the path

    def test_goal_panel_has_zero_offset_and_no_hint(self):
        maze = reference_maze()
        desc = describe_state(maze, maze.goal)
        assert desc.goal_offset == (0, 0)
        assert desc.hint is None

    def test_closed_cell_is_rejected(self):
        with pytest.raises(ValueError, match="not an open cell"):
            describe_state(reference_maze(), Position(9, 9))

    @pytest.mark.parametrize("seed", range(20))
    def test_wall_digit_is_the_exact_hop_range(self, seed):
        # the wall digit is sharp: hopping that far succeeds, one more fails
        maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
        for cell in maze.open_cells:
            desc = describe_state(maze, cell)
            for d in Direction:
                wall = desc.wall_dist.get(d, 0)
                if 0 < wall <= 3:
                    assert transition(maze, cell, Move(d, (wall,)))[1]
                if wall < 3:
                    assert not transition(maze, cell, Move(d, (wall + 1,)))[1]

    @pytest.mark.parametrize("seed", range(20))
    def test_crossing_digit_is_the_nearest_strictly_interior_junction(self, seed):
        maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
        for cell in maze.open_cells:
            desc = describe_state(maze, cell)
            for d in Direction:
                wall = desc.wall_dist.get(d, 0)
                interior = [
                    dist
                    for dist in range(1, wall)
                    if maze.is_junction(cell.step(d, dist))
                ]
                assert desc.crossing_dist.get(d) == (interior[0] if interior else None)

    @pytest.mark.parametrize("seed", range(10))
    def test_hint_shown_exactly_on_junctions(self, seed):
        maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
        for cell in maze.open_cells:
            desc = describe_state(maze, cell)
            assert (desc.hint is not None) == maze.is_junction(cell)


class TestEnumerateMoves:
    def test_count_at_length_one(self):
        assert len(enumerate_moves(1)) == 16  # 4 directions x 4 primitive values

    def test_count_at_length_five(self):
        # 4 * (4 + 16 + 64 + 256 + 1024)
        assert len(enumerate_moves(5)) == 5456

    def test_moves_are_distinct(self):
        moves = enumerate_moves(3)
        assert len(set(moves)) == len(moves)

    def test_ordering_is_stable(self):
        # protocol clients index into this list; the first entries are frozen
        moves = enumerate_moves(2)
        assert moves[0] == Move(L, (0,))
        assert moves[3] == Move(L, (3,))
        assert moves[4] == Move(L, (0, 0))
        assert moves[20] == Move(U, (0,))

    def test_prefix_property(self):
        # enumerate_moves(k) is a prefix-per-direction of enumerate_moves(k+1)
        short, long = enumerate_moves(2), enumerate_moves(3)
        for d in Direction:
            s = [m for m in short if m.direction is d]
            l = [m for m in long if m.direction is d]
            assert l[: len(s)] == s

    def test_rejects_non_positive_length(self):
        with pytest.raises(ValueError):
            enumerate_moves(0)


@st.composite
def maze_and_cell(draw):
    seed = draw(st.integers(0, 500))
    maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
    cell = draw(st.sampled_from(sorted(maze.open_cells)))
    return maze, cell


class TestTransition:
    @given(
        maze_and_cell(),
        st.sampled_from(list(Direction)),
        st.lists(st.integers(0, 3), min_size=1, max_size=5),
    )
    def test_affordable_agrees_with_transition_validity(self, mc, d, prims):
        maze, cell = mc
        move = Move(d, tuple(prims))
        _, valid = transition(maze, cell, move)
        assert valid == affordable(describe_state(maze, cell), move)

    @given(maze_and_cell(), st.sampled_from(list(Direction)))
    def test_failed_hop_stays_put(self, mc, d):
        maze, cell = mc
        desc = describe_state(maze, cell)
        too_far = min(desc.wall_dist.get(d, 0) + 1, 3)
        new_pos, valid = transition(maze, cell, Move(d, (too_far,) * 3))
        if not valid:
            assert new_pos == cell

    @given(maze_and_cell())
    def test_zero_displacement_is_always_valid(self, mc):
        maze, cell = mc
        new_pos, valid = transition(maze, cell, Move(R, (0, 0, 0)))
        assert valid and new_pos == cell

    def test_hop_lands_displacement_cells_away(self):
        maze = reference_maze()
        new_pos, valid = transition(maze, Position(0, 3), Move(R, (3, 2)))
        assert valid and new_pos == Position(5, 3)

    def test_hop_passes_over_junctions(self):
        # the crossing at distance 2 does not stop a displacement-5 hop
        maze = reference_maze()
        desc = describe_state(maze, Position(0, 3))
        assert desc.crossing_dist[R] == 2
        assert transition(maze, Position(0, 3), Move(R, (3, 2)))[1]

    def test_hop_from_closed_cell_is_rejected(self):
        with pytest.raises(ValueError, match="not an open cell"):
            transition(reference_maze(), Position(9, 9), Move(R, (1,)))
