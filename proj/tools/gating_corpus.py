#!/usr/bin/env python3
"""Writes the gating fixture corpus: ten recipe documents with injected
descriptive sentences, plus gold workflow nets for the instruction steps.

Sentences are hand-annotated token tables; gold processes are hand-written
block trees. Usage: gating_corpus.py OUT_DIR
"""

import pathlib
import sys
from xml.sax.saxutils import escape

UPOS = {
    "ART": "DET", "NN": "NOUN", "NE": "PROPN", "ADJD": "ADJ", "ADJA": "ADJ",
    "ADV": "ADV", "PROAV": "ADV", "APPR": "ADP", "APPRART": "ADP",
    "KON": "CCONJ", "PPER": "PRON", "PDS": "PRON", "PPOSAT": "DET",
    "PIS": "PRON", "PTKVZ": "ADP", "CARD": "NUM", "XY": "X",
    "VVINF": "VERB", "VVIMP": "VERB", "VVFIN": "VERB", "VVPP": "VERB",
    "VAFIN": "AUX", "$.": "PUNCT", "$,": "PUNCT",
}


def T(form, lemma, xpos, head, deprel):
    return (form, lemma, xpos, head, deprel)


P = lambda head: T(".", "--", "$.", head, "punct")  # noqa: E731
EXCL = lambda head: T("!", "--", "$.", head, "punct")  # noqa: E731


def text_of(tokens):
    out = ""
    for form, _, xpos, _, _ in tokens:
        if out and not xpos.startswith("$"):
            out += " "
        out += form
    return out


# Descriptive sentences shared between documents.
SCHMECKT_GUT = [
    T("Das", "der", "PDS", 2, "sb"), T("schmeckt", "schmecken", "VVFIN", 0, "ROOT"),
    T("besonders", "besonders", "ADV", 4, "mo"), T("gut", "gut", "ADJD", 2, "mo"),
    P(2)]
GUTEN_APPETIT = [
    T("Guten", "gut", "ADJA", 2, "nk"), T("Appetit", "Appetit", "NN", 0, "ROOT"),
    EXCL(2)]
SALAT = [
    T("Dazu", "dazu", "PROAV", 2, "mo"), T("passt", "passen", "VVFIN", 0, "ROOT"),
    T("ein", "ein", "ART", 5, "nk"), T("frischer", "frisch", "ADJA", 5, "nk"),
    T("Salat", "Salat", "NN", 2, "sb"), P(2)]


def past(person, verb, verb_lemma, det, noun, noun_lemma, adj):
    """'Meine <person> <verb> <det> <noun> immer <adj>.'"""
    return [
        T("Meine", "mein", "PPOSAT", 2, "nk"), T(person, person, "NN", 3, "sb"),
        T(verb, verb_lemma, "VVFIN", 0, "ROOT"), T(det, "der", "ART", 5, "nk"),
        T(noun, noun_lemma, "NN", 3, "oa"), T("immer", "immer", "ADV", 3, "mo"),
        T(adj, adj, "ADJD", 3, "mo"), P(3)]


def describe(det, noun, noun_lemma, verb, verb_lemma, adj):
    """'<Det> <noun> <verb> <adj>.'"""
    return [
        T(det, "der", "ART", 2, "nk"), T(noun, noun_lemma, "NN", 3, "sb"),
        T(verb, verb_lemma, "VVFIN", 0, "ROOT"), T(adj, adj, "ADJD", 3, "mo"),
        P(3)]


def step(det, noun, noun_lemma, verb, extra=()):
    """'<Det> <noun> [extra...] <verb>.' with extra as (form, lemma, xpos)
    adverbials hanging off the verb."""
    n = 2 + len(extra) + 1
    tokens = [T(det, "der", "ART", 2, "nk"), T(noun, noun_lemma, "NN", n, "oa")]
    for form, lemma, xpos in extra:
        tokens.append(T(form, lemma, xpos, n, "mo"))
    tokens.append(T(verb, verb, "VVINF", 0, "ROOT"))
    tokens.append(P(n))
    return tokens


def step_in(det, noun, noun_lemma, prep_det, place, place_lemma, verb):
    """'<Det> <noun> in <prep_det> <place> <verb>.'"""
    return [
        T(det, "der", "ART", 2, "nk"), T(noun, noun_lemma, "NN", 6, "oa"),
        T("in", "in", "APPR", 6, "mo"), T(prep_det, "ein", "ART", 5, "nk"),
        T(place, place_lemma, "NN", 3, "nk"), T(verb, verb, "VVINF", 0, "ROOT"),
        P(6)]


def coordinated(first, conj, second):
    """Two object+verb clauses joined by `conj`; each clause is
    (det, noun, noun_lemma, verb)."""
    d1, n1, l1, v1 = first
    d2, n2, l2, v2 = second
    return [
        T(d1, "der", "ART", 2, "nk"), T(n1, l1, "NN", 3, "oa"),
        T(v1, v1, "VVINF", 0, "ROOT"), T(conj, conj, "KON", 3, "cd"),
        T(d2, "der", "ART", 6, "nk"), T(n2, l2, "NN", 7, "oa"),
        T(v2, v2, "VVINF", 4, "cj"), P(3)]


def imperative(verb, verb_lemma, det, noun, noun_lemma, rest):
    """'<Verb> Sie <det> <noun> <rest...>.' rest entries are
    (form, lemma, xpos, deprel) attached to the verb."""
    tokens = [
        T(verb, verb_lemma, "VVIMP", 0, "ROOT"), T("Sie", "Sie", "PPER", 1, "sb"),
        T(det, "der", "ART", 4, "nk"), T(noun, noun_lemma, "NN", 1, "oa")]
    for form, lemma, xpos, deprel in rest:
        tokens.append(T(form, lemma, xpos, 1, deprel))
    tokens.append(P(1))
    return tokens


DOCUMENTS = {
    "d01_zwiebelsuppe": (
        [
            step("Die", "Zwiebeln", "Zwiebel", "würfeln", [("fein", "fein", "ADJD")]),
            SCHMECKT_GUT,
            step_in("Die", "Butter", "Butter", "einem", "Topf", "Topf", "erhitzen"),
            step("Die", "Zwiebeln", "Zwiebel", "dünsten", [("darin", "darin", "PROAV")]),
            past("Oma", "kochte", "kochen", "die", "Suppe", "Suppe", "so"),
        ],
        ("seq", "würfeln(die zwiebeln)", "erhitzen(die butter)", "dünsten(die zwiebeln)"),
    ),
    "d02_nudeln": (
        [
            step_in("Die", "Nudeln", "Nudel", "einem", "Topf", "Topf", "kochen"),
            [T("Inzwischen", "inzwischen", "ADV", 4, "mo"),
             T("den", "der", "ART", 3, "nk"), T("Speck", "Speck", "NN", 4, "oa"),
             T("würfeln", "würfeln", "VVINF", 0, "ROOT"), P(4)],
            [T("Das", "der", "ART", 2, "nk"), T("Gericht", "Gericht", "NN", 3, "sb"),
             T("ist", "sein", "VAFIN", 0, "ROOT"),
             T("schnell", "schnell", "ADJD", 5, "mo"),
             T("gemacht", "machen", "VVPP", 3, "oc"), P(3)],
            step("Die", "Nudeln", "Nudel", "abgießen"),
            GUTEN_APPETIT,
        ],
        ("seq", ("and", "kochen(die nudeln)", "würfeln(den speck)"), "abgießen(die nudeln)"),
    ),
    "d03_reis": (
        [
            coordinated(("Die", "Kartoffeln", "Kartoffel", "schälen"), "und",
                        ("den", "Reis", "Reis", "waschen")),
            past("Mutter", "machte", "machen", "den", "Reis", "Reis", "cremig"),
            step_in("Den", "Reis", "Reis", "einem", "Topf", "Topf", "kochen"),
        ],
        ("seq", ("and", "schälen(die kartoffeln)", "waschen(den reis)"), "kochen(den reis)"),
    ),
    "d04_fleisch": (
        [
            step("Das", "Fleisch", "Fleisch", "waschen"),
            coordinated(("Das", "Fleisch", "Fleisch", "braten"), "oder",
                        ("das", "Gemüse", "Gemüse", "dünsten")),
            SALAT,
            [T("Mit", "mit", "APPR", 3, "mo"), T("Salz", "Salz", "NN", 1, "nk"),
             T("würzen", "würzen", "VVINF", 0, "ROOT"), P(3)],
            [T("Es", "es", "PPER", 2, "sb"), T("schmeckt", "schmecken", "VVFIN", 0, "ROOT"),
             T("auch", "auch", "ADV", 2, "mo"), T("kalt", "kalt", "ADJD", 2, "mo"),
             T("sehr", "sehr", "ADV", 6, "mo"), T("gut", "gut", "ADJD", 2, "mo"), P(2)],
        ],
        ("seq", "waschen(das fleisch)", ("xor", "braten(das fleisch)", "dünsten(das gemüse)"),
         "würzen"),
    ),
    "d05_auflauf": (
        [
            [T("Zuerst", "zuerst", "ADV", 4, "mo"), T("den", "der", "ART", 3, "nk"),
             T("Ofen", "Ofen", "NN", 4, "oa"), T("vorheizen", "vorheizen", "VVINF", 0, "ROOT"),
             P(4)],
            step("Die", "Möhren", "Möhre", "schälen"),
            past("Familie", "liebte", "lieben", "die", "Möhren", "Möhre", "sehr"),
            step_in("Die", "Möhren", "Möhre", "einer", "Auflaufform", "Auflaufform",
                    "backen"),
            [T("Viel", "viel", "PIS", 2, "nk"), T("Spaß", "Spaß", "NN", 0, "ROOT"),
             T("beim", "bei", "APPRART", 2, "mnr"), T("Nachkochen", "Nachkochen", "NN", 3, "nk"),
             EXCL(2)],
        ],
        ("seq", "vorheizen(den ofen)", "schälen(die möhren)", "backen(die möhren)"),
    ),
    "d06_teig": (
        [
            step("Den", "Teig", "Teig", "kneten", [("kräftig", "kräftig", "ADJD")]),
            [T("Den", "der", "ART", 2, "nk"), T("Teig", "Teig", "NN", 5, "oa"),
             T("eine", "ein", "ART", 4, "nk"), T("Stunde", "Stunde", "NN", 5, "mo"),
             T("ruhen", "ruhen", "VVINF", 6, "oc"), T("lassen", "lassen", "VVIMP", 0, "ROOT"),
             P(6)],
            [T("Der", "der", "ART", 2, "nk"), T("Teig", "Teig", "NN", 3, "sb"),
             T("wird", "werden", "VAFIN", 0, "ROOT"), T("herrlich", "herrlich", "ADJD", 5, "mo"),
             T("locker", "locker", "ADJD", 3, "pd"), P(3)],
            [T("Das", "der", "ART", 2, "nk"), T("Rezept", "Rezept", "NN", 3, "sb"),
             T("gelingt", "gelingen", "VVFIN", 0, "ROOT"), T("immer", "immer", "ADV", 3, "mo"),
             P(3)],
            step("Den", "Teig", "Teig", "backen"),
        ],
        ("seq", "kneten(den teig)", "lassen+ruhen(den teig)", "backen(den teig)"),
    ),
    "d07_suppe": (
        [
            step("Die", "Suppe", "Suppe", "erhitzen"),
            [T("Dabei", "dabei", "PROAV", 4, "mo"), T("die", "der", "ART", 3, "nk"),
             T("Sahne", "Sahne", "NN", 4, "oa"),
             T("unterrühren", "unterrühren", "VVINF", 0, "ROOT"), P(4)],
            [T("Ich", "ich", "PPER", 2, "sb"), T("finde", "finden", "VVFIN", 0, "ROOT"),
             T(",", "--", "$,", 2, "punct"), T("die", "der", "ART", 5, "nk"),
             T("Suppe", "Suppe", "NN", 6, "sb"), T("schmeckt", "schmecken", "VVFIN", 2, "oc"),
             T("so", "so", "ADV", 6, "mo"), T("am", "an", "APPRART", 6, "mo"),
             T("besten", "gut", "ADJD", 8, "nk"), P(2)],
            step("Die", "Suppe", "Suppe", "pürieren"),
        ],
        ("seq", ("and", "erhitzen(die suppe)", "unterrühren(die sahne)"), "pürieren(die suppe)"),
    ),
    "d08_speck": (
        [
            imperative("Schneiden", "schneiden", "den", "Speck", "Speck",
                       [("fein", "fein", "ADJD", "mo")]),
            imperative("Braten", "braten", "den", "Speck", "Speck",
                       [("knusprig", "knusprig", "ADJD", "mo")]),
            past("Tante", "machte", "machen", "den", "Speck", "Speck", "knusprig"),
            imperative("Geben", "geben", "die", "Zwiebeln", "Zwiebel",
                       [("hinzu", "hinzu", "PTKVZ", "svp")]),
        ],
        ("seq", "schneiden(den speck)", "braten(den speck)", "hinzugeben(die zwiebeln)"),
    ),
    "d09_reis_pfanne": (
        [
            step("Den", "Reis", "Reis", "waschen"),
            describe("Der", "Reis", "Reis", "bleibt", "bleiben", "saftig"),
            [T("Mehr", "mehr", "PIS", 2, "nk"), T("Rezepte", "Rezept", "NN", 0, "ROOT"),
             T("unter", "unter", "APPR", 2, "mnr"),
             T("https://example.org/rezepte", "https://example.org/rezepte", "XY", 3, "nk"),
             P(2)],
            step("Den", "Reis", "Reis", "kochen", [("kurz", "kurz", "ADJD")]),
            step("Den", "Reis", "Reis", "würzen"),
            past("Nachbarin", "bereitete", "bereiten", "den", "Reis", "Reis", "so"),
        ],
        ("seq", "waschen(den reis)", "kochen(den reis)", "würzen(den reis)"),
    ),
    "d10_kartoffeln": (
        [
            step("Die", "Kartoffeln", "Kartoffel", "schälen"),
            coordinated(("Die", "Kartoffeln", "Kartoffel", "kochen"), "und",
                        ("den", "Knoblauch", "Knoblauch", "hacken")),
            describe("Das", "Gemüse", "Gemüse", "duftet", "duften", "herrlich"),
            step("Die", "Kartoffeln", "Kartoffel", "stampfen"),
            GUTEN_APPETIT,
        ],
        ("seq", "schälen(die kartoffeln)", ("and", "kochen(die kartoffeln)", "hacken(den knoblauch)"),
         "stampfen(die kartoffeln)"),
    ),
}


def conllu(sentences):
    out = []
    for number, tokens in enumerate(sentences, 1):
        out.append(f"# sent_id = s{number}")
        out.append(f"# text = {text_of(tokens)}")
        for i, (form, lemma, xpos, head, deprel) in enumerate(tokens, 1):
            out.append("\t".join([str(i), form, lemma, UPOS[xpos], xpos, "_",
                                  str(head), deprel, "_", "_"]))
        out.append("")
    return "\n".join(out) + "\n"


class Net:
    def __init__(self):
        self.places, self.transitions, self.arcs = [], [], []

    def place(self):
        pid = f"p{len(self.places)}"
        self.places.append(pid)
        return pid

    def transition(self, label):
        tid = f"t{len(self.transitions)}"
        self.transitions.append((tid, label))
        return tid

    def arc(self, a, b):
        self.arcs.append((a, b))

    def block(self, tree, start, end):
        """Wires `tree` between places start and end."""
        if isinstance(tree, str):
            t = self.transition(tree)
            self.arc(start, t)
            self.arc(t, end)
            return
        kind, *children = tree
        if kind == "seq":
            cur = start
            for k, child in enumerate(children):
                nxt = end if k == len(children) - 1 else self.place()
                self.block(child, cur, nxt)
                cur = nxt
        elif kind == "xor":
            for child in children:
                self.block(child, start, end)
        elif kind == "and":
            split, join = self.transition(None), self.transition(None)
            self.arc(start, split)
            self.arc(join, end)
            for child in children:
                a, b = self.place(), self.place()
                self.arc(split, a)
                self.arc(b, join)
                self.block(child, a, b)
        else:
            raise ValueError(kind)

    def pnml(self, name):
        lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<pnml>",
                 f'  <net id="{name}" type="http://www.pnml.org/version-2009/grammar/ptnet">',
                 '    <page id="n0">']
        for p in self.places:
            lines.append(f'      <place id="{p}"/>')
        for tid, label in self.transitions:
            if label is None:
                lines.append(f'      <transition id="{tid}">')
                lines.append("        <name><text></text></name>")
                lines.append('        <toolspecific tool="ProM" version="6.4" '
                             'activity="$invisible$"/>')
                lines.append("      </transition>")
            else:
                lines.append(f'      <transition id="{tid}"><name><text>'
                             f"{escape(label)}</text></name></transition>")
        for k, (a, b) in enumerate(self.arcs):
            lines.append(f'      <arc id="a{k}" source="{a}" target="{b}"/>')
        lines += ["    </page>", "  </net>", "</pnml>"]
        return "\n".join(lines) + "\n"


def main():
    out = pathlib.Path(sys.argv[1])
    (out / "docs").mkdir(parents=True, exist_ok=True)
    (out / "gold").mkdir(parents=True, exist_ok=True)
    for name, (sentences, process) in DOCUMENTS.items():
        (out / "docs" / f"{name}.conllu").write_text(conllu(sentences), encoding="utf-8")
        net = Net()
        net.block(process, net.place(), net.place())
        (out / "gold" / f"{name}.pnml").write_text(net.pnml(name), encoding="utf-8")


if __name__ == "__main__":
    main()
