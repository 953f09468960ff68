from approxfrechet.plot import free_mask, render_freespace

from conftest import SEG_A, SEG_B, walk


def test_mask_all_free_or_blocked():
    assert free_mask(SEG_A, SEG_B, 5.0, 8, 8).all()
    assert not free_mask(SEG_A, SEG_B, 0.5, 8, 8).any()


def test_large_input_is_scaled(rng):
    P, Q = walk(rng, 400), walk(rng, 300)
    svg = render_freespace(P, Q, 3.0, with_path=False)
    head = svg.splitlines()[0]
    assert 'width="2048"' in head
    assert "<line" not in svg


def test_path_drawn_when_decision_yes(rng):
    P = walk(rng, 10)
    svg = render_freespace(P, P + 0.1, 0.2)
    assert "<polyline" in svg
