from toucan_prep.text import clean_text


def test_whitespace_collapse():
    assert clean_text("  Bonjour le   monde ") == "Bonjour le monde"


def test_guillemets_and_thin_spaces():
    assert clean_text("« Oui »") == '"Oui"'


def test_empty_is_identity():
    assert clean_text("") == ""


def test_dashes_and_curly_quotes():
    assert clean_text("l’été — vite") == "l'été - vite"


def test_control_characters_removed():
    assert clean_text("a\x00b\tc\r\nd") == "a b c d"


def test_nfc_normalization():
    # e + combining acute composes to é
    assert clean_text("café") == "café"


def test_idempotent():
    samples = [
        "  Bonjour le   monde ",
        "« Oui »",
        "l’été — vite",
        "plain text",
    ]
    for s in samples:
        once = clean_text(s)
        assert clean_text(once) == once
