import pytest
from hypothesis import given, strategies as st

from torsorlab.errors import IdentityViolation, PreconditionError, ValidationError
from torsorlab.rationality import (
    Certificate,
    WcRelationSystem,
    format_combination,
    pic_classes,
    quadric_parity_argument,
    quadric_system,
)


def test_zero_element_forced():
    sys = WcRelationSystem(("P", "Q"))
    ok, cert = sys.is_forced_zero({})
    assert ok and not any(cert.combination)


def test_single_relation():
    sys = WcRelationSystem(("P", "Q"), [{"Q": 2}])
    assert sys.is_forced_zero({"Q": 1}) == (False, None)
    ok, cert = sys.is_forced_zero({"Q": 4})
    assert ok and cert.combination == (2,)
    assert sys.order_in_quotient({"Q": 1}) == 2
    assert sys.order_in_quotient({"P": 1}) == 0


def test_three_relations_d3():
    sys = WcRelationSystem(("P", "Q"), [{"Q": 2}, {"P": 2, "Q": -1}, {"P": 1, "Q": -3}])
    ok, cert = sys.is_forced_zero({"P": 1})
    assert ok
    cert.verify()


def test_unknown_generator():
    sys = WcRelationSystem(("P", "Q"))
    with pytest.raises(ValidationError):
        sys.is_forced_zero({"R": 1})
    with pytest.raises(ValidationError):
        sys.add_relation({"R": 1})
    with pytest.raises(ValidationError):
        sys.vector([1, 2, 3])
    with pytest.raises(ValidationError):
        WcRelationSystem(("P", "P"))


def test_bad_certificate_detected():
    with pytest.raises(IdentityViolation):
        Certificate((1, 0), (1,), ((0, 1),)).verify()


def test_pic_classes():
    sys = quadric_system(3)
    assert pic_classes(sys, 0) == (0, 0)
    assert sys.is_forced_zero(pic_classes(sys, 0))[0]
    only_canonical = WcRelationSystem(("P", "Q"), [{"Q": 2}], degree_one="Q")
    for n in range(-4, 5):
        assert only_canonical.is_forced_zero(pic_classes(only_canonical, 2 * n))[0]
    three = pic_classes(only_canonical, 3)
    assert three == (0, 3)
    assert not only_canonical.is_forced_zero(three)[0]
    assert only_canonical.is_forced_zero([a - b for a, b in zip(three, (0, 1))])[0]
    with pytest.raises(PreconditionError):
        pic_classes(WcRelationSystem(("P", "Q")), 1)


def test_parity_examples():
    v = quadric_parity_argument(3)
    assert v.forced
    assert [name for name, _, _ in v.steps] == ["Q", "P"]
    assert [vec for _, vec, _ in v.steps] == [(0, 1), (1, 0)]
    v.verify()
    assert quadric_parity_argument(0).forced
    neg = quadric_parity_argument(3, drop_canonical=True)
    assert not neg.forced
    assert neg.quotient_factors == [5]
    assert neg.order_of_p == 5


@given(st.integers(-10, 10))
def test_parity_forced_everywhere(d):
    v = quadric_parity_argument(d)
    assert v.forced and v.verify()
    assert v.quotient_factors == []


@given(st.integers(-10, 10))
def test_negative_control(d):
    v = quadric_parity_argument(d, drop_canonical=True)
    k = abs(2 * d - 1)
    assert v.order_of_p == k
    assert v.forced == (k == 1)


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), max_size=4),
       st.lists(st.integers(-10, 10), min_size=3, max_size=3))
def test_membership_certificates(rels, target):
    sys = WcRelationSystem(("a", "b", "c"), rels)
    ok, cert = sys.is_forced_zero(target)
    if ok:
        assert cert.verify()
        assert sys.order_in_quotient(target) == 1
    else:
        assert sys.order_in_quotient(target) != 1


def test_without_and_format():
    sys = quadric_system(3)
    assert len(sys.without(0).relations) == 2
    assert format_combination(("P", "Q"), (2, -1)) == "2P - Q"
    assert format_combination(("P", "Q"), (0, 0)) == "0"
