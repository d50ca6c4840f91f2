from apppop.javasrc import build_graph, parse_unit, resolve
from apppop.javasrc.lexer import parse_number_literal, tokenize
from apppop.javasrc.model import ClassKind, StructuralModel
from apppop.javasrc.parser import split_words


def build_model(files: dict[str, str]) -> StructuralModel:
    model = StructuralModel()
    for path, text in files.items():
        unit = parse_unit(path, text=text)
        assert unit.error is None, (path, unit.error)
        model.units.append(unit)
        model.classes.extend(unit.classes)
    return resolve(model)


class TestLexer:
    def test_operators_longest_match(self):
        toks, _ = tokenize("a >>>= b >>> c >> d >= e > f")
        ops = [t.value for t in toks if t.kind == "op"]
        assert ops == [">>>=", ">>>", ">>", ">=", ">"]

    def test_string_escapes_and_text_blocks(self):
        toks, _ = tokenize('String s = "a\\"b"; String t = """multi\nline""";')
        strings = [t.value for t in toks if t.kind == "string"]
        assert strings[0] == 'a\\"b'
        assert "multi" in strings[1]

    def test_number_literals(self):
        assert parse_number_literal("0x10") == 16.0
        assert parse_number_literal("1_000") == 1000.0
        assert parse_number_literal("2.5f") == 2.5
        assert parse_number_literal("3L") == 3.0
        assert parse_number_literal("0b101") == 5.0

    def test_comments_do_not_mark_code_lines(self):
        _, code_lines = tokenize("// only comment\nint x;\n/* block */\n")
        assert code_lines == {2}


class TestSplitWords:
    def test_camel_case_and_boundaries(self):
        assert split_words("parseHttpResponse") == ["parse", "http", "response"]
        assert split_words("MAX_VALUE") == ["max", "value"]
        assert split_words("x2y") == ["x2y"]


class TestParseUnit:
    def test_empty_class(self):
        unit = parse_unit("A.java", text="class A { }")
        assert len(unit.classes) == 1
        assert unit.classes[0].methods == []
        assert unit.classes[0].kind == ClassKind.NORMAL

    def test_anonymous_listener_kinds(self):
        src = """
        class A {
            void go() {
                Runnable r = new Runnable() { public void run() { } };
            }
        }
        """
        unit = parse_unit("A.java", text=src)
        kinds = {c.kind for c in unit.classes}
        assert kinds == {ClassKind.NORMAL, ClassKind.ANONYMOUS}
        anon = [c for c in unit.classes if c.kind == ClassKind.ANONYMOUS][0]
        assert anon.superclass_name == "Runnable"
        assert anon.enclosing == "A"

    def test_unbalanced_braces_recorded(self):
        unit = parse_unit("A.java", text="class A { void f() { }")
        assert unit.error is not None
        assert unit.error.line >= 1
        assert unit.classes == []

    def test_parse_is_deterministic(self):
        src = "class A { int f(int x) { return x + 1; } }"
        u1 = parse_unit("A.java", text=src)
        u2 = parse_unit("A.java", text=src)
        assert u1.classes[0].methods[0].stats == u2.classes[0].methods[0].stats

    def test_interface_enum_inner_kinds(self):
        src = """
        package p;
        interface Face { void f(); }
        enum Color { RED, GREEN }
        class Outer { static class Nested { } }
        """
        unit = parse_unit("P.java", text=src)
        kinds = {c.simple_name: c.kind for c in unit.classes}
        assert kinds["Face"] == ClassKind.INTERFACE
        assert kinds["Color"] == ClassKind.ENUM
        assert kinds["Nested"] == ClassKind.INNER
        face = next(c for c in unit.classes if c.simple_name == "Face")
        assert face.methods[0].has_body is False

    def test_generics_not_counted_as_comparisons(self):
        src = """
        class A {
            void f() {
                java.util.Map<String, java.util.List<Integer>> m = null;
                int x = 0;
                if (x < 3 && x > -2) { x = 1; }
            }
        }
        """
        unit = parse_unit("A.java", text=src)
        stats = unit.classes[0].methods[0].stats
        assert stats.comparison_count == 2

    def test_do_while_counts_one_loop(self):
        src = "class A { void f() { do { f(); } while (true); while (false) { } } }"
        unit = parse_unit("A.java", text=src)
        assert unit.classes[0].methods[0].stats.loop_count == 2

    def test_switch_rule_arrows_not_lambdas(self):
        src = """
        class A {
            int f(int x) {
                Runnable r = () -> f(1);
                switch (x) {
                    case 1 -> x++;
                    default -> x--;
                }
                return x;
            }
        }
        """
        unit = parse_unit("A.java", text=src)
        stats = unit.classes[0].methods[0].stats
        assert stats.lambda_count == 1
        assert stats.missing_default_count == 0

    def test_missing_default_detected(self):
        src = "class A { void f(int x) { switch (x) { case 1: break; } } }"
        unit = parse_unit("A.java", text=src)
        assert unit.classes[0].methods[0].stats.missing_default_count == 1

    def test_empty_catch_detected(self):
        src = "class A { void f() { try { f(); } catch (Exception e) { } } }"
        unit = parse_unit("A.java", text=src)
        stats = unit.classes[0].methods[0].stats
        assert stats.empty_catch_count == 1
        assert stats.try_catch_count == 1
        assert stats.catch_count == 1

    def test_multi_declarator_counts(self):
        src = "class A { void f() { int a = 1, b = 2, c; } }"
        unit = parse_unit("A.java", text=src)
        assert unit.classes[0].methods[0].stats.variable_decl_count == 3

    def test_enum_constant_bodies_are_anonymous(self):
        src = """
        enum Op {
            PLUS(1) { int apply(int x) { return x + 1; } },
            MINUS(2);
            Op(int tag) { }
        }
        """
        unit = parse_unit("Op.java", text=src)
        anon = [c for c in unit.classes if c.kind == ClassKind.ANONYMOUS]
        assert len(anon) == 1
        assert anon[0].superclass_name == "Op"

    def test_log_statements(self):
        src = """
        class A {
            void f() {
                Log.d("t", "m");
                logger.info("x");
                System.out.println("y");
                other.call("z");
            }
        }
        """
        unit = parse_unit("A.java", text=src)
        assert unit.classes[0].methods[0].stats.log_statement_count == 3


class TestResolve:
    def test_same_package_reference(self):
        model = build_model({
            "p/A.java": "package p; class A { B b; }",
            "p/B.java": "package p; class B { }",
        })
        a = model.resolution_index["p.A"]
        assert "p.B" in a.resolved_refs

    def test_stdlib_unresolved(self):
        model = build_model({"p/A.java": "package p; import java.util.List; class A { List x; }"})
        a = model.resolution_index["p.A"]
        assert a.resolved_refs == set()

    def test_ambiguous_simple_name_unresolved(self):
        model = build_model({
            "p/Util.java": "package p; public class Util { }",
            "q/Util.java": "package q; public class Util { }",
            "r/C.java": "package r; class C { Util u; }",
        })
        c = model.resolution_index["r.C"]
        assert c.resolved_refs == set()

    def test_unique_simple_name_resolves(self):
        model = build_model({
            "p/Only.java": "package p; public class Only { }",
            "r/C.java": "package r; class C { Only u; }",
        })
        assert "p.Only" in model.resolution_index["r.C"].resolved_refs

    def test_explicit_import_wins_over_unique_name(self):
        # List is imported from java.util, so the corpus class p.List must not match
        model = build_model({
            "p/List.java": "package p; public class List { }",
            "r/C.java": "package r; import java.util.List; class C { List u; }",
        })
        assert model.resolution_index["r.C"].resolved_refs == set()

    def test_bare_call_resolves_through_enclosing(self):
        src = """
        package p;
        class A {
            void target() { }
            void go() {
                Runnable r = new Runnable() { public void run() { target(); } };
            }
        }
        """
        model = build_model({"p/A.java": src})
        callers = model.method_callers.get(("p.A", "target", 0), set())
        assert ("p.A$1", "run", 0) in callers


class TestBuildGraph:
    def test_single_class_graph(self):
        model = build_model({"p/A.java": "package p; class A { }"})
        g = build_graph(model, "class")
        assert g.nodes == ["p.A"] and g.edges == []

    def test_inherit_edge(self):
        model = build_model({
            "p/A.java": "package p; class A extends B { }",
            "p/B.java": "package p; class B { }",
        })
        g = build_graph(model, "class")
        assert ("p.A", "p.B", "inherit") in g.edges

    def test_package_projection_removes_self_edges(self):
        model = build_model({
            "p/A.java": "package p; class A { B b; }",
            "p/B.java": "package p; class B { C c; }",
            "p/C.java": "package p; class C { A a; }",
        })
        g = build_graph(model, "package")
        assert g.nodes == ["p"] and g.edges == []

    def test_file_edges_witnessed_by_class_edges(self):
        files = {
            "p/A.java": "package p; class A extends B { C c; }",
            "p/B.java": "package p; class B { }",
            "p/C.java": "package p; class C { }",
        }
        model = build_model(files)
        class_edges = build_graph(model, "class").edge_pairs()
        file_of = {c.qualified_name: c.unit_path for c in model.classes}
        for u, v in build_graph(model, "file").edge_pairs():
            assert any(file_of[a] == u and file_of[b] == v for a, b in class_edges)

    def test_node_counts(self):
        files = {
            "p/A.java": "package p; class A { class In { } }",
            "p/B.java": "package p; class B { }",
        }
        model = build_model(files)
        assert len(build_graph(model, "class").nodes) == len(model.classes) == 3
        assert len(build_graph(model, "file").nodes) == 2
