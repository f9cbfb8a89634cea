# Regenerates fixtures/turtle/*.golden with rdflib as an independent Turtle
# reader. Usage: python3 tools/turtle_golden.py fixtures/turtle/*.ttl
# Only canonical numerals appear in the inputs: rdflib rewrites "+5" or
# "007" to their canonical forms, while the Rust parser keeps tokens as written.
import json, sys, rdflib
from rdflib import URIRef, BNode, Literal
rdflib.NORMALIZE_LITERALS = False
XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"
def term(t):
    if isinstance(t, URIRef): return "I|" + str(t)
    if isinstance(t, BNode): return "B|"
    if isinstance(t, Literal):
        dt = str(t.datatype) if t.datatype else (
            "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString" if t.language else XSD_STRING)
        return "L|" + json.dumps(str(t), ensure_ascii=False) + "|" + dt + "|" + (t.language or "")
    raise ValueError(t)
for path in sys.argv[1:]:
    g = rdflib.Graph(); g.parse(path, format="turtle")
    lines = sorted("\t".join(term(x) for x in tr) for tr in g)
    open(path[:-4] + ".golden", "w").write("\n".join(lines) + "\n")
    print(path, len(lines))
