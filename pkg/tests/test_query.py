"""Query language: parse, render, construct, validate, execute."""

import re
from datetime import date

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DAILY_QUERY, HOURLY_QUERY, NGRAM_QUERY, PREDICTION_QUERY
from bx.errors import (
    InvalidArgumentError,
    ModuleError,
    ParseError,
    TypeMismatchError,
    UnknownColumnError,
    UnknownModuleError,
    UnknownTableError,
)
from bx.model import Schema, ValueKind
from bx.query import (
    And,
    Columns,
    Compare,
    In,
    Literal,
    QueryAst,
    StructuredRequest,
    Transform,
    compile_predicate,
    construct,
    execute,
    parse,
    render,
    validate,
)
from bx.repository import ModuleDescriptor, ModuleRepository, ParamSpec, TransformModule
from bx.storage import Catalog

BUZZ_SCHEMA = Schema.of(
    ("date", ValueKind.DATE),
    ("time", ValueKind.TIME),
    ("product", ValueKind.TEXT),
    ("buzz_score", ValueKind.FLOAT),
)

KEYWORDS = {"SELECT", "TRANSFORM", "USING", "AS", "FROM", "WHERE", "AND", "IN"}


def text_literal(value):
    return Literal(ValueKind.TEXT, value)


def date_literal(iso):
    return Literal(ValueKind.DATE, date.fromisoformat(iso))


class TestReferenceQueryParsing:
    def test_hourly_block(self):
        ast = parse(HOURLY_QUERY)
        assert ast == QueryAst(
            projection=Transform(
                input_columns=("date", "time", "buzz_score"),
                module_name="hourly_analysis",
            ),
            source="Yahoo_Buzz_Scores",
            predicate=And(
                children=(
                    Compare("product", "=", text_literal("EBOOKS")),
                    Compare("date", ">=", date_literal("2005-05-23")),
                    Compare("date", "<=", date_literal("2005-05-27")),
                )
            ),
        )

    def test_daily_block(self):
        ast = parse(DAILY_QUERY)
        assert ast.source == "Yahoo_Buzz_Scores"
        assert ast.projection == Transform(
            input_columns=("date", "buzz_score"), module_name="daily_analysis"
        )
        assert ast.predicate == And(
            children=(
                In(
                    "product",
                    tuple(
                        text_literal(p)
                        for p in ("ONLNMUSIC", "EBOOKS", "VGAME", "SOCNETS", "PHOTO")
                    ),
                ),
                Compare("date", ">=", date_literal("2005-04-01")),
                Compare("date", "<=", date_literal("2005-07-26")),
            )
        )

    def test_prediction_block(self):
        ast = parse(PREDICTION_QUERY)
        assert ast.projection == Transform(
            input_columns=("date", "buzz_score"), module_name="daily_prediction"
        )
        assert ast.predicate == And(
            children=(
                In("product", (text_literal("EBOOKS"),)),
                Compare("date", ">=", date_literal("2005-07-08")),
                Compare("date", "<=", date_literal("2005-07-22")),
            )
        )

    def test_ngram_block_with_output_names(self):
        ast = parse(NGRAM_QUERY)
        assert ast == QueryAst(
            projection=Transform(
                input_columns=("n-gram", "frequency"),
                module_name="ngram_analysis",
                output_names=("distinct_n-gram", "total_frequency"),
            ),
            source="Yahoo_n-grams",
            predicate=None,
        )

    def test_reference_queries_round_trip_through_render(self):
        for text in (HOURLY_QUERY, DAILY_QUERY, PREDICTION_QUERY, NGRAM_QUERY):
            ast = parse(text)
            assert parse(render(ast)) == ast


class TestParsingRules:
    def test_keywords_case_insensitive(self):
        lower = parse("select transform(a) using 'sum' from t where a >= 3 and b in (1, 2)")
        upper = parse("SELECT TRANSFORM(a) USING 'sum' FROM t WHERE a >= 3 AND b IN (1, 2)")
        assert lower == upper

    def test_semicolon_optional(self):
        assert parse("SELECT * FROM t;") == parse("SELECT * FROM t")

    def test_star_projection(self):
        assert parse("SELECT * FROM t").projection == Columns(star=True)

    def test_column_list_projection(self):
        ast = parse("SELECT a, b-c, _d FROM t")
        assert ast.projection == Columns(names=("a", "b-c", "_d"))

    def test_bare_and_quoted_dates_normalize_identically(self):
        bare = parse("SELECT * FROM t WHERE d >= 2005-05-23")
        quoted = parse("SELECT * FROM t WHERE d >= '2005-05-23'")
        assert bare == quoted
        assert bare.predicate.literal == date_literal("2005-05-23")

    def test_non_date_string_stays_text(self):
        ast = parse("SELECT * FROM t WHERE s = '2005-13-45'")
        assert ast.predicate.literal == text_literal("2005-13-45")

    def test_quote_escaping(self):
        ast = parse("SELECT * FROM t WHERE s = 'it''s'")
        assert ast.predicate.literal == text_literal("it's")

    def test_numeric_literals(self):
        ast = parse("SELECT * FROM t WHERE a >= -3 AND b <= 2.5 AND c = 1e3")
        terms = ast.predicate.children
        assert terms[0].literal == Literal(ValueKind.INT, -3)
        assert terms[1].literal == Literal(ValueKind.FLOAT, 2.5)
        assert terms[2].literal == Literal(ValueKind.FLOAT, 1000.0)

    def test_module_params_parse_from_quoted_reference(self):
        ast = parse(
            "SELECT TRANSFORM(date, buzz_score) "
            "USING 'daily_prediction(technique=rp, selector=days:14, target=2005-07-23)' "
            "FROM t"
        )
        assert ast.projection.module_params == (
            ("technique", "rp"),
            ("selector", "days:14"),
            ("target", "2005-07-23"),
        )

    def test_invalid_bare_date_rejected(self):
        with pytest.raises(ParseError, match="invalid date"):
            parse("SELECT * FROM t WHERE d >= 2005-02-31")

    def test_bad_module_parameter(self):
        with pytest.raises(ParseError, match="parameter"):
            parse("SELECT TRANSFORM(a) USING 'm(nonsense)' FROM t")

    def test_bad_module_reference(self):
        with pytest.raises(ParseError, match="module reference"):
            parse("SELECT TRANSFORM(a) USING '9lives' FROM t")


class TestParseDiagnostics:
    def test_wrong_leading_keyword(self):
        with pytest.raises(ParseError) as info:
            parse("SELEC * FROM t")
        err = info.value
        assert err.offset == 0
        assert set(err.expected) == {"SELECT"}
        assert "offset 0" in str(err)

    def test_missing_from_reports_position_and_expectation(self):
        text = "SELECT a, b WERE x = 1"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == text.index("WERE")
        assert set(info.value.expected) == {"FROM"}

    def test_missing_comparison_operator(self):
        text = "SELECT * FROM t WHERE a ! 3"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == text.index("!")

    def test_trailing_garbage(self):
        text = "SELECT * FROM t extra"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == text.index("extra")
        assert set(info.value.expected) == {"end of input"}

    def test_unterminated_string(self):
        text = "SELECT TRANSFORM(a) USING 'oops FROM t"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == text.index("'")

    def test_offset_is_byte_based(self):
        # Two-byte character before the error point shifts the byte offset.
        text = "SELECT * FROM t WHERE s = 'é' ,"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == len(text[: text.index(",")].encode("utf-8"))

    def test_eof_reported_as_end_of_input(self):
        with pytest.raises(ParseError, match="end of input"):
            parse("SELECT * FROM")

    def test_keyword_cannot_be_identifier(self):
        with pytest.raises(ParseError):
            parse("SELECT * FROM where")


# --- property: parse(render(ast)) == ast over a generated AST corpus ---

_identifier = (
    st.from_regex(r"[A-Za-z_][A-Za-z0-9_\-]{0,8}", fullmatch=True)
    .filter(lambda s: s.upper() not in KEYWORDS)
)
_param_value = st.from_regex(r"[A-Za-z0-9_.:\-]{1,12}", fullmatch=True)
_literal = st.one_of(
    st.integers(min_value=-(10**12), max_value=10**12),
    st.floats(allow_nan=False, allow_infinity=False, width=64),
    st.dates(min_value=date(1900, 1, 1), max_value=date(2199, 12, 31)),
    st.text(
        alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
        max_size=12,
    ),
).map(Literal.of)

_compare = st.builds(
    Compare,
    column=_identifier,
    op=st.sampled_from(("=", ">=", "<=")),
    literal=_literal,
)
_in_term = st.builds(
    In,
    column=_identifier,
    literals=st.lists(_literal, min_size=1, max_size=3).map(tuple),
)
_term = st.one_of(_compare, _in_term)
_predicate = st.one_of(
    st.none(),
    _term,
    st.lists(_term, min_size=2, max_size=4).map(lambda ts: And(children=tuple(ts))),
)

_columns = st.one_of(
    st.just(Columns(star=True)),
    st.lists(_identifier, min_size=1, max_size=4, unique=True).map(
        lambda names: Columns(names=tuple(names))
    ),
)
_transform = st.builds(
    Transform,
    input_columns=st.lists(_identifier, min_size=1, max_size=3, unique=True).map(tuple),
    module_name=_identifier,
    module_params=st.lists(
        st.tuples(_identifier, _param_value), max_size=3, unique_by=lambda kv: kv[0]
    ).map(tuple),
    output_names=st.one_of(
        st.none(),
        st.lists(_identifier, min_size=1, max_size=3, unique=True).map(tuple),
    ),
)
_ast = st.builds(
    QueryAst,
    projection=st.one_of(_columns, _transform),
    source=_identifier,
    predicate=_predicate,
)


class TestRenderRoundTrip:
    @given(_ast)
    def test_parse_render_round_trip(self, ast):
        assert parse(render(ast)) == ast

    def test_canonical_form(self):
        ast = parse(HOURLY_QUERY)
        assert render(ast) == (
            "SELECT TRANSFORM (date, time, buzz_score) USING 'hourly_analysis' "
            "FROM Yahoo_Buzz_Scores WHERE product = 'EBOOKS' "
            "AND date >= '2005-05-23' AND date <= '2005-05-27'"
        )

    def test_star_render(self):
        assert render(parse("select * from t")) == "SELECT * FROM t"

    def test_params_render_inside_module_reference(self):
        ast = parse("SELECT TRANSFORM(a, b) USING 'ngram_analysis(phrase=bird flu)' FROM t")
        assert "USING 'ngram_analysis(phrase=bird flu)'" in render(ast)


class TestConstruct:
    def test_agreement_with_hourly_query_text(self):
        request = StructuredRequest.from_json(
            {
                "table": "Yahoo_Buzz_Scores",
                "columns": ["date", "time", "buzz_score"],
                "module": "hourly_analysis",
                "filters": [
                    {"column": "product", "op": "=", "value": "EBOOKS"},
                    {"column": "date", "op": ">=", "value": "2005-05-23"},
                    {"column": "date", "op": "<=", "value": "2005-05-27"},
                ],
            }
        )
        assert construct(request) == parse(HOURLY_QUERY)

    def test_agreement_with_prediction_query_text(self):
        request = StructuredRequest.from_json(
            {
                "table": "Yahoo_Buzz_Scores",
                "columns": ["date", "buzz_score"],
                "module": "daily_prediction",
                "filters": [
                    {"column": "product", "op": "in", "values": ["EBOOKS"]},
                    {"column": "date", "op": ">=", "value": "2005-07-08"},
                    {"column": "date", "op": "<=", "value": "2005-07-22"},
                ],
            }
        )
        assert construct(request) == parse(PREDICTION_QUERY)

    def test_star_and_plain_column_requests(self):
        star = construct(StructuredRequest(table="t", columns=["*"]))
        assert star == parse("SELECT * FROM t")
        plain = construct(StructuredRequest(table="t", columns=["a"]))
        assert plain == parse("SELECT a FROM t")

    def test_single_filter_stands_alone(self):
        from bx.query import Filter

        ast = construct(
            StructuredRequest(table="t", columns=["a"], filters=[Filter("a", ">=", 3)])
        )
        assert ast.predicate == Compare("a", ">=", Literal(ValueKind.INT, 3))

    def test_module_params_carried(self):
        request = StructuredRequest(
            table="t",
            columns=["date", "buzz_score"],
            module="daily_prediction",
            module_params={"technique": "rp", "selector": "days:14"},
        )
        ast = construct(request)
        assert ast.projection.params_dict() == {"technique": "rp", "selector": "days:14"}
        assert parse(render(ast)) == ast

    def test_empty_columns_rejected(self):
        with pytest.raises(InvalidArgumentError):
            construct(StructuredRequest(table="t", columns=[]))

    def test_empty_in_list_rejected(self):
        from bx.query import Filter

        with pytest.raises(InvalidArgumentError):
            construct(
                StructuredRequest(table="t", columns=["a"], filters=[Filter("a", "in", [])])
            )

    def test_unknown_filter_op_rejected(self):
        from bx.query import Filter

        with pytest.raises(InvalidArgumentError):
            construct(
                StructuredRequest(table="t", columns=["a"], filters=[Filter("a", "!=", 1)])
            )

    def test_from_json_rejects_malformed_payloads(self):
        for payload in (
            {"columns": ["a"]},
            {"table": "t"},
            {"table": "t", "columns": "a"},
            {"table": "t", "columns": ["a"], "filters": [{"column": "a", "op": "like"}]},
        ):
            with pytest.raises(InvalidArgumentError):
                StructuredRequest.from_json(payload)


def _identity_module_factory():
    class Identity(TransformModule):
        def open(self, params, input_schema):
            pass

        def push(self, row):
            return [row]

    return Identity()


def make_env(rows=None):
    catalog = Catalog()
    rows = rows if rows is not None else []
    catalog.create_table("buzz", BUZZ_SCHEMA, rows)
    repository = ModuleRepository()
    repository.register(
        ModuleDescriptor(
            name="identity",
            input_arity="any",
            output_schema="dynamic",
            description="echoes rows",
        ),
        _identity_module_factory,
    )
    return catalog, repository


class TestValidate:
    def test_plain_projection_schema(self):
        catalog, repository = make_env()
        schema = validate(parse("SELECT product, buzz_score FROM buzz"), catalog, repository)
        assert schema.names == ("product", "buzz_score")
        assert schema.kind_of("buzz_score") is ValueKind.FLOAT

    def test_star_schema_is_table_schema(self):
        catalog, repository = make_env()
        schema = validate(parse("SELECT * FROM buzz"), catalog, repository)
        assert schema == BUZZ_SCHEMA

    def test_unknown_table(self):
        catalog, repository = make_env()
        with pytest.raises(UnknownTableError):
            validate(parse("SELECT * FROM nope"), catalog, repository)

    def test_unknown_projection_column(self):
        catalog, repository = make_env()
        with pytest.raises(UnknownColumnError):
            validate(parse("SELECT nope FROM buzz"), catalog, repository)

    def test_unknown_predicate_column(self):
        catalog, repository = make_env()
        with pytest.raises(UnknownColumnError):
            validate(parse("SELECT * FROM buzz WHERE nope = 1"), catalog, repository)

    def test_unknown_module(self):
        catalog, repository = make_env()
        with pytest.raises(UnknownModuleError):
            validate(parse("SELECT TRANSFORM(buzz_score) USING 'nope' FROM buzz"), catalog, repository)

    def test_arity_mismatch(self):
        catalog, repository = make_env()
        repository.register(
            ModuleDescriptor(name="pair_only", input_arity=2, output_schema="dynamic"),
            _identity_module_factory,
        )
        with pytest.raises(InvalidArgumentError, match="2"):
            validate(
                parse("SELECT TRANSFORM(buzz_score) USING 'pair_only' AS x FROM buzz"),
                catalog,
                repository,
            )

    def test_unknown_param_key(self):
        catalog, repository = make_env()
        repository.register(
            ModuleDescriptor(
                name="fussy",
                input_arity=1,
                param_spec=(ParamSpec("mode", required=False),),
                output_schema="dynamic",
            ),
            _identity_module_factory,
        )
        with pytest.raises(InvalidArgumentError, match="bogus"):
            validate(
                parse("SELECT TRANSFORM(buzz_score) USING 'fussy(bogus=1)' AS x FROM buzz"),
                catalog,
                repository,
            )

    def test_dynamic_schema_requires_output_names(self):
        catalog, repository = make_env()
        with pytest.raises(InvalidArgumentError, match="AS"):
            validate(
                parse("SELECT TRANSFORM(buzz_score) USING 'identity' FROM buzz"),
                catalog,
                repository,
            )

    @pytest.mark.parametrize(
        "where",
        [
            "buzz_score >= 'high'",  # TEXT literal vs FLOAT column
            "product = 3",  # INT literal vs TEXT column
            "date >= 5",  # INT literal vs DATE column
            "date = 'not-a-date'",  # unparseable TEXT vs DATE column
            "time <= '25:00:00'",  # out-of-range TEXT vs TIME column
        ],
    )
    def test_incomparable_predicate_types(self, where):
        catalog, repository = make_env()
        with pytest.raises(TypeMismatchError):
            validate(parse(f"SELECT * FROM buzz WHERE {where}"), catalog, repository)

    def test_numeric_kinds_are_cross_comparable(self):
        catalog, repository = make_env()
        validate(parse("SELECT * FROM buzz WHERE buzz_score >= 3"), catalog, repository)

    def test_text_literal_against_temporal_columns_parses(self):
        catalog, repository = make_env()
        validate(
            parse("SELECT * FROM buzz WHERE date >= '2005-05-23' AND time <= '09:00:00'"),
            catalog,
            repository,
        )


class TestCompilePredicate:
    def test_match_all_when_absent(self):
        compiled = compile_predicate(None, BUZZ_SCHEMA)
        assert compiled.fingerprint == "*"
        assert compiled.matches((None, None, None, None))

    def test_null_cells_fail_every_comparison(self):
        schema = Schema.of(("a", ValueKind.INT))
        for text in ("a = 1", "a >= -99", "a <= 99", "a IN (1, 2)"):
            compiled = compile_predicate(parse(f"SELECT * FROM t WHERE {text}").predicate, schema)
            assert not compiled.matches((None,))

    def test_fingerprint_tracks_predicate_text(self):
        one = compile_predicate(parse("SELECT * FROM t WHERE a = 1").predicate, Schema.of(("a", ValueKind.INT)))
        two = compile_predicate(parse("SELECT * FROM t WHERE a = 2").predicate, Schema.of(("a", ValueKind.INT)))
        assert one.fingerprint != two.fingerprint

    @given(
        rows=st.lists(
            st.tuples(
                st.one_of(st.none(), st.integers(min_value=-20, max_value=20)),
                st.one_of(st.none(), st.floats(min_value=-20, max_value=20, allow_nan=False)),
            ),
            max_size=80,
        ),
        bound=st.integers(min_value=-20, max_value=20),
        choices=st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=4),
    )
    def test_filter_matches_brute_force(self, rows, bound, choices):
        schema = Schema.of(("a", ValueKind.INT), ("b", ValueKind.FLOAT))
        text = (
            f"SELECT * FROM t WHERE a >= {bound} "
            f"AND b <= {bound + 5} AND a IN ({', '.join(map(str, choices))})"
        )
        compiled = compile_predicate(parse(text).predicate, schema)

        def oracle(row):
            a, b = row
            return (
                a is not None
                and b is not None
                and a >= bound
                and b <= bound + 5
                and a in choices
            )

        assert [r for r in rows if compiled.matches(r)] == [r for r in rows if oracle(r)]


class TestExecute:
    def _rows(self):
        d = date(2005, 5, 23)
        from datetime import time as t

        return [
            (d, t(9, 0, 0), "EBOOKS", 7.0),
            (d, t(10, 0, 0), "EBOOKS", 9.0),
            (d, t(9, 0, 0), "VGAME", 5.0),
            (None, t(9, 0, 0), "EBOOKS", 1.0),
        ]

    def test_star_projection_returns_filtered_rows_in_order(self):
        catalog, repository = make_env(self._rows())
        result = execute(parse("SELECT * FROM buzz WHERE product = 'EBOOKS'"), catalog, repository)
        assert result.schema == BUZZ_SCHEMA
        assert [r[3] for r in result.rows] == [7.0, 9.0, 1.0]
        assert result.row_count == 3

    def test_column_projection_reorders_and_keeps_table_order(self):
        catalog, repository = make_env(self._rows())
        result = execute(parse("SELECT buzz_score, product FROM buzz"), catalog, repository)
        assert result.schema.names == ("buzz_score", "product")
        assert result.rows[0] == (7.0, "EBOOKS")

    def test_transform_streams_only_matching_rows(self):
        catalog, repository = make_env(self._rows())
        result = execute(
            parse(
                "SELECT TRANSFORM(product, buzz_score) USING 'identity' AS p, s "
                "FROM buzz WHERE buzz_score >= 6"
            ),
            catalog,
            repository,
        )
        assert result.rows == (("EBOOKS", 7.0), ("EBOOKS", 9.0))
        assert result.schema.names == ("p", "s")

    def test_dynamic_schema_inferred_from_first_non_null(self):
        catalog, repository = make_env(self._rows())
        result = execute(
            parse("SELECT TRANSFORM(date, buzz_score) USING 'identity' AS d, s FROM buzz"),
            catalog,
            repository,
        )
        assert result.schema.kind_of("d") is ValueKind.DATE
        assert result.schema.kind_of("s") is ValueKind.FLOAT

    def test_dynamic_schema_defaults_to_text_for_all_null_columns(self):
        catalog, repository = make_env([(None, None, None, 1.0)])
        result = execute(
            parse("SELECT TRANSFORM(product, buzz_score) USING 'identity' AS p, s FROM buzz"),
            catalog,
            repository,
        )
        assert result.schema.kind_of("p") is ValueKind.TEXT

    def test_as_names_override_module_schema(self):
        catalog, repository = make_env(self._rows())
        repository.register(
            ModuleDescriptor(
                name="fixed_out",
                input_arity=1,
                output_schema=Schema.of(("val", ValueKind.FLOAT)),
            ),
            _identity_module_factory,
        )
        result = execute(
            parse("SELECT TRANSFORM(buzz_score) USING 'fixed_out' AS renamed FROM buzz"),
            catalog,
            repository,
        )
        assert result.schema.names == ("renamed",)
        assert result.schema.kind_of("renamed") is ValueKind.FLOAT

    def test_as_name_count_must_match_schema(self):
        catalog, repository = make_env(self._rows())
        repository.register(
            ModuleDescriptor(
                name="fixed_out2",
                input_arity=1,
                output_schema=Schema.of(("val", ValueKind.FLOAT)),
            ),
            _identity_module_factory,
        )
        with pytest.raises(InvalidArgumentError):
            validate(
                parse("SELECT TRANSFORM(buzz_score) USING 'fixed_out2' AS a, b FROM buzz"),
                catalog,
                repository,
            )

    def test_module_failure_carries_name_and_row_index(self):
        catalog, repository = make_env(self._rows())

        def crashing_factory():
            class Crashes(TransformModule):
                def open(self, params, input_schema):
                    self.count = 0

                def push(self, row):
                    self.count += 1
                    if self.count == 2:
                        raise RuntimeError("boom")
                    return [row]

            return Crashes()

        repository.register(
            ModuleDescriptor(name="crashes", input_arity="any", output_schema="dynamic"),
            crashing_factory,
        )
        with pytest.raises(ModuleError) as info:
            execute(
                parse("SELECT TRANSFORM(product) USING 'crashes' AS p FROM buzz"),
                catalog,
                repository,
            )
        assert info.value.module_name == "crashes"
        assert info.value.row_index == 1
        assert "boom" in str(info.value)

    def test_query_text_recorded_canonically(self):
        catalog, repository = make_env(self._rows())
        result = execute(parse("select * from buzz;"), catalog, repository)
        assert result.query_text == "SELECT * FROM buzz"

    def test_result_pages_partition_rows(self):
        catalog, repository = make_env(self._rows() * 10)
        result = execute(parse("SELECT * FROM buzz"), catalog, repository)
        seen, cursor = [], None
        while True:
            page = result.page(cursor, 7)
            seen.extend(page.rows)
            cursor = page.next_cursor
            if cursor is None:
                break
        assert seen == list(result.rows)

    def test_result_ids_are_unique(self):
        catalog, repository = make_env(self._rows())
        a = execute(parse("SELECT * FROM buzz"), catalog, repository)
        b = execute(parse("SELECT * FROM buzz"), catalog, repository)
        assert a.result_id != b.result_id
        assert re.fullmatch(r"r-[0-9a-f]{12}", a.result_id)
