import random

import pytest
from hypothesis import given, settings

from helpers import R1, R2, SHAPES_COLUMNS, SHAPES_ROWS, contexts, random_context, shapes_classes

from idmap.code_model import CodeModel, IdentifierKind, klass, package
from idmap.fca import (
    ContextError,
    FormalContext,
    brute_force_lattice,
    build_aoc_poset,
    build_context,
    derive_attributes,
    derive_objects,
)


def _shapes_context(drawing_models):
    return build_context(list(drawing_models), IdentifierKind.CLASS)


def _aoc_from_lattice(ctx):
    """Attribute- and object-concepts picked out of the full lattice."""
    lattice = brute_force_lattice(ctx)
    return {c for c in lattice if c.reduced_intent or c.reduced_extent}


class TestContext:
    def test_shapes_incidence(self, drawing_models):
        ctx = _shapes_context(drawing_models)
        assert ctx.objects == (R1, R2)
        assert len(ctx.attributes) == 8
        for obj in (R1, R2):
            expected = {klass(f"shapes.{c}") for c, x in zip(SHAPES_COLUMNS, SHAPES_ROWS[obj]) if x}
            assert ctx.row(obj) == expected

    def test_needs_two_variants(self, drawing_models):
        with pytest.raises(ContextError):
            build_context([drawing_models[0]], IdentifierKind.CLASS)

    def test_unique_variant_names(self, drawing_models):
        with pytest.raises(ContextError):
            build_context([drawing_models[0], drawing_models[0]], IdentifierKind.CLASS)

    def test_identical_variants(self):
        ids = [package("p"), klass("p.A")]
        ctx = build_context([CodeModel.build("a", ids), CodeModel.build("b", ids)], None)
        assert all(all(row) for row in ctx.incidence)

    def test_disjoint_variants_have_no_common_column(self):
        a = CodeModel.build("a", [package("p")])
        b = CodeModel.build("b", [package("q")])
        ctx = build_context([a, b], IdentifierKind.PACKAGE)
        assert not any(all(row[j] for row in ctx.incidence) for j in range(len(ctx.attributes)))

    def test_rejects_empty_column(self):
        with pytest.raises(ContextError):
            FormalContext(("a", "b"), ("x",), ((False,), (False,)))

    def test_rejects_bad_shape(self):
        with pytest.raises(ContextError):
            FormalContext(("a",), ("x", "y"), ((True,),))


class TestDerivation:
    def test_examples(self, drawing_models):
        ctx = _shapes_context(drawing_models)
        common = shapes_classes("MyLine", "DrawingShapes", "PaintJPanel", "MyShape")
        assert derive_attributes(ctx, {R1, R2}) == common
        assert derive_objects(ctx, common) == {R1, R2}
        assert derive_objects(ctx, shapes_classes("MyOval")) == {R1}
        assert derive_objects(ctx, shapes_classes("MyOval", "MyRoundRectangle")) == set()
        assert derive_attributes(ctx, ()) == set(ctx.attributes)

    @given(contexts())
    def test_galois_connection(self, ctx):
        rng = random.Random(len(ctx.attributes))
        objs = {g for g in ctx.objects if rng.random() < 0.5}
        attrs = {m for m in ctx.attributes if rng.random() < 0.3}
        # A <= B' iff B <= A'
        assert (objs <= derive_objects(ctx, attrs)) == (attrs <= derive_attributes(ctx, objs))
        closed = derive_objects(ctx, derive_attributes(ctx, objs))
        assert objs <= closed
        assert derive_objects(ctx, derive_attributes(ctx, closed)) == closed


class TestAOCPoset:
    def test_drawing_shapes(self, drawing_models):
        poset = build_aoc_poset(_shapes_context(drawing_models))
        assert len(poset.concepts) == 3
        top = poset.concepts[0]
        assert top.extent == {R1, R2} and not top.reduced_extent
        assert top.reduced_intent == shapes_classes("MyLine", "DrawingShapes", "PaintJPanel", "MyShape")
        assert poset.concept_of_object(R1).reduced_intent == shapes_classes("MyRectangle", "MyOval")
        assert poset.concept_of_object(R2).reduced_intent == shapes_classes("MyRoundRectangle", "My3DRectangle")
        assert poset.concept_of_object(R1).intent == top.intent | shapes_classes("MyRectangle", "MyOval")
        assert sorted(poset.hasse_edges) == [(1, 0), (2, 0)]

    def test_identical_rows_collapse(self):
        ctx = FormalContext.from_sets({"a": {1, 2}, "b": {1, 2}})
        poset = build_aoc_poset(ctx)
        assert len(poset.concepts) == 1
        (c,) = poset.concepts
        assert c.reduced_extent == {"a", "b"} and c.reduced_intent == {1, 2}
        assert poset.hasse_edges == ()

    def test_one_variant_extends_the_other(self):
        poset = build_aoc_poset(FormalContext.from_sets({"a": {1, 2}, "b": {1, 2, 3}}))
        assert [(set(c.extent), set(c.reduced_intent), set(c.reduced_extent)) for c in poset.concepts] == [
            ({"a", "b"}, {1, 2}, {"a"}),
            ({"b"}, {3}, {"b"}),
        ]
        assert poset.hasse_edges == ((1, 0),)

    def test_no_attributes(self):
        poset = build_aoc_poset(FormalContext(("a", "b"), (), ((), ())))
        assert len(poset.concepts) == 1 and poset.concepts[0].reduced_extent == {"a", "b"}

    @settings(max_examples=150)
    @given(contexts())
    def test_matches_brute_force(self, ctx):
        assert set(build_aoc_poset(ctx).concepts) == _aoc_from_lattice(ctx)

    @given(contexts())
    def test_reduced_labels_partition(self, ctx):
        poset = build_aoc_poset(ctx)
        intents = [m for c in poset.concepts for m in c.reduced_intent]
        extents = [g for c in poset.concepts for g in c.reduced_extent]
        assert sorted(intents) == sorted(ctx.attributes)
        assert sorted(extents) == sorted(ctx.objects)

    @given(contexts())
    def test_hasse_edges_are_covers(self, ctx):
        poset = build_aoc_poset(ctx)
        cs = poset.concepts
        edges = set(poset.hasse_edges)
        for i, child in enumerate(cs):
            for j, parent in enumerate(cs):
                between = any(child.extent < k.extent < parent.extent for k in cs)
                assert ((i, j) in edges) == (child.extent < parent.extent and not between)
                if (i, j) in edges:
                    assert parent.intent < child.intent

    @given(contexts(max_objects=2))
    def test_two_variants_reduce_to_set_algebra(self, ctx):
        if len(ctx.objects) < 2:
            return
        a, b = ctx.objects
        poset = build_aoc_poset(ctx)
        blocks = {c.extent: c.reduced_intent for c in poset.concepts}
        assert blocks.get(frozenset({a, b}), frozenset()) == ctx.row(a) & ctx.row(b)
        assert blocks.get(frozenset({a}), frozenset()) == ctx.row(a) - ctx.row(b)
        assert blocks.get(frozenset({b}), frozenset()) == ctx.row(b) - ctx.row(a)


class TestBruteForce:
    def test_shapes_lattice_has_four_concepts(self, drawing_models):
        lattice = brute_force_lattice(_shapes_context(drawing_models))
        # top, two object-concepts and the empty-extent bottom
        assert len(lattice) == 4
        assert frozenset() in {c.extent for c in lattice}

    def test_single_object(self):
        ctx = FormalContext.from_sets({"a": {1, 2}})
        assert {(c.extent, c.intent) for c in brute_force_lattice(ctx)} == {(frozenset({"a"}), frozenset({1, 2}))}

    def test_limit(self):
        ctx = FormalContext.from_sets({f"g{i}": {i} for i in range(17)})
        with pytest.raises(ContextError):
            brute_force_lattice(ctx)

    def test_every_pair_is_closed(self):
        ctx = random_context(random.Random(7))
        for c in brute_force_lattice(ctx):
            assert derive_attributes(ctx, c.extent) == c.intent
            assert derive_objects(ctx, c.intent) == c.extent
