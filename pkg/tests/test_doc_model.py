import pytest
from hypothesis import given, strategies as st

from casretrieval.doc_model import (
    Corpus,
    ElementPath,
    XMLParseError,
    absolute_path,
    ingest,
    is_proper_ancestor,
    load_corpus,
    load_saved_corpus,
    parse_document,
    read_manifest,
    save_corpus,
)

P = ElementPath.parse


def test_parse_simple_structure():
    doc = parse_document(b"<article><bdy/></article>", "x")
    assert doc.root.tag == "article"
    assert [c.tag for c in doc.root.children] == ["bdy"]


def test_per_tag_ordinals():
    doc = parse_document(b"<article><bdy><ip1/><p/><p/></bdy></article>", "x")
    paths = [str(n.path) for n in doc.iter()]
    assert paths == [
        "/article[1]",
        "/article[1]/bdy[1]",
        "/article[1]/bdy[1]/ip1[1]",
        "/article[1]/bdy[1]/p[1]",
        "/article[1]/bdy[1]/p[2]",
    ]


def test_fifth_paragraph_of_second_section():
    secs = "".join("<sec>" + "<p/>" * 6 + "</sec>" for _ in range(2))
    doc = parse_document(f"<article><bdy>{secs}</bdy></article>", "x")
    node = doc.root.children[0].children[1].children[4]
    assert str(absolute_path(node)) == "/article[1]/bdy[1]/sec[2]/p[5]"


def test_root_path_is_single_step():
    doc = parse_document(b"<book><ch/></book>", "x")
    assert absolute_path(doc.root) == ElementPath((("book", 1),))


@pytest.mark.parametrize("bad", [b"<article><bdy>", b"<a></b>", b"<a/><b/>", b"", b"   \n"])
def test_malformed_or_empty(bad):
    with pytest.raises(XMLParseError) as info:
        parse_document(bad, "bad")
    assert "byte offset" in str(info.value)


def test_parse_error_offset():
    with pytest.raises(XMLParseError) as info:
        parse_document(b"<article><bdy></article>", "bad")
    assert info.value.offset == 16


def test_attributes_and_entities():
    doc = parse_document(b'<article id="7"><p>a &amp; b &#65;</p></article>', "x")
    assert doc.root.attributes == {"id": "7"}
    assert doc.find("/article[1]/p[1]").text() == "a & b A"


def test_undeclared_entities_with_external_dtd_are_dropped():
    doc = parse_document(b'<!DOCTYPE article SYSTEM "x.dtd"><article>a &ndash; b</article>', "x")
    assert doc.text() == "a b"


def test_text_collapses_whitespace_and_separates_elements():
    doc = parse_document(b"<a>\n  one <b>two</b><c>three</c>\n four </a>", "x")
    assert doc.text() == "one two three four"


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("/article[1]", "/article[1]/bdy[1]", True),
        ("/article[1]/bdy[1]/p[1]", "/article[1]/bdy[1]/p[1]", False),
        ("/article[1]/bdy[1]/sec[2]", "/article[1]/bdy[1]/sec[1]/p[2]", False),
        ("/article[1]/bdy[1]", "/article[1]", False),
    ],
)
def test_is_proper_ancestor(a, b, expected):
    assert is_proper_ancestor(P(a), P(b)) is expected


@pytest.mark.parametrize("bad", ["article[1]", "/article", "/article[0]", "/a[1]//b[1]", "/a[x]"])
def test_path_parse_rejects(bad):
    with pytest.raises(ValueError):
        P(bad)


steps = st.lists(
    st.tuples(st.sampled_from(["article", "bdy", "sec", "ss1", "p", "ip1"]), st.integers(1, 50)), min_size=1, max_size=8
)


@given(steps)
def test_path_round_trip(s):
    path = ElementPath(tuple(s))
    assert ElementPath.parse(str(path)) == path


@st.composite
def xml_trees(draw, depth=0):
    tag = draw(st.sampled_from(["sec", "p", "ss1", "it"]))
    if depth >= 3:
        return f"<{tag}>x</{tag}>"
    kids = draw(st.lists(xml_trees(depth=depth + 1), max_size=4))
    return f"<{tag}>" + "".join(kids) + f"</{tag}>"


@given(st.lists(xml_trees(), max_size=5))
def test_path_node_bijection_and_contiguous_ordinals(kids):
    doc = parse_document("<article>" + "".join(kids) + "</article>", "x")
    nodes = list(doc.iter())
    assert len({n.path for n in nodes}) == len(nodes)
    for node in nodes:
        assert doc.find(node.path) is node
        by_tag = {}
        for child in node.children:
            by_tag.setdefault(child.tag, []).append(child.path.steps[-1][1])
        for ordinals in by_tag.values():
            assert ordinals == list(range(1, len(ordinals) + 1))
    assert parse_document("<article>" + "".join(kids) + "</article>", "x") == doc


def test_load_corpus_doc_ids_and_order(tmp_path):
    (tmp_path / "ic" / "2000").mkdir(parents=True)
    (tmp_path / "ic" / "2000" / "w6074.xml").write_bytes(b"<article/>")
    (tmp_path / "an").mkdir()
    (tmp_path / "an" / "a1.xml").write_bytes(b"<article/>")
    (tmp_path / "notes.txt").write_text("ignored")
    corpus = load_corpus(tmp_path)
    assert corpus.doc_ids == ["an/a1", "ic/2000/w6074"]


def test_ingest_sorts_and_rejects_duplicates():
    d1 = parse_document(b"<a/>", "b")
    d2 = parse_document(b"<a/>", "a")
    assert ingest([d1, d2]).doc_ids == ["a", "b"]
    with pytest.raises(ValueError):
        Corpus([d1, parse_document(b"<a/>", "b")])


def test_save_and_reload_corpus(tmp_path):
    docs = [
        parse_document(b'<article k="v"><p>x &amp; y</p><p>z</p></article>', "z1"),
        parse_document(b"<article><bdy/></article>", "a2"),
    ]
    corpus = Corpus(docs)  # explicit, non-lexicographic storage order
    save_corpus(corpus, tmp_path)
    assert read_manifest(tmp_path / "manifest.txt") == ["z1", "a2"]
    again = load_saved_corpus(tmp_path)
    assert again.doc_ids == ["z1", "a2"]
    assert list(again) == list(corpus)
