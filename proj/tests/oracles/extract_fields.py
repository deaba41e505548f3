#!/usr/bin/env python3
"""Pull author order, DOI and plain-text title out of an emitted XML file.

usage: extract_fields.py crossref|jats|xmp FILE

Prints one JSON object {"authors": [...], "doi": str|null, "title": str}.
Math in JATS titles is rebuilt as $tex$ so every format is compared in the
same plain-text form.
"""

import json
import sys

from lxml import etree

CR = "{http://www.crossref.org/schema/5.3.1}"
RDF = "{http://www.w3.org/1999/02/22-rdf-syntax-ns#}"
DC = "{http://purl.org/dc/elements/1.1/}"
PRISM = "{http://prismstandard.org/namespaces/basic/3.0/}"


def text(el):
    return el.text if el is not None and el.text is not None else None


def crossref(root):
    article = root.find(f".//{CR}journal_article")
    authors = []
    for p in article.iterfind(f"{CR}contributors/{CR}person_name"):
        given = text(p.find(f"{CR}given_name"))
        surname = text(p.find(f"{CR}surname"))
        authors.append(f"{given} {surname}" if given else surname)
    return {
        "authors": authors,
        "doi": text(article.find(f"{CR}doi_data/{CR}doi")),
        "title": text(article.find(f"{CR}titles/{CR}title")) or "",
    }


PLAIN_ESCAPES = {"$": "\\$", "{": "\\{", "}": "\\}", "\\": "\\textbackslash{}", "~": "\\textasciitilde{}"}


def escape_plain(s):
    return "".join(PLAIN_ESCAPES.get(c, c) for c in s)


def jats_rich(el):
    out = escape_plain(el.text or "")
    for child in el:
        if child.tag == "inline-formula":
            out += "$" + (child.findtext("tex-math") or "") + "$"
        else:
            out += jats_rich(child)
        out += escape_plain(child.tail or "")
    return out


def jats(root):
    meta = root.find("front/article-meta")
    authors = []
    for c in meta.iterfind("contrib-group/contrib"):
        sn = c.find("string-name")
        if sn is not None:
            authors.append(sn.text or "")
            continue
        given = c.findtext("name/given-names")
        surname = c.findtext("name/surname")
        authors.append(f"{given} {surname}" if given else surname)
    doi = None
    for aid in meta.iterfind("article-id"):
        if aid.get("pub-id-type") == "doi":
            doi = aid.text
    return {
        "authors": authors,
        "doi": doi,
        "title": jats_rich(meta.find("title-group/article-title")),
    }


def xmp(root):
    desc = root.find(f".//{RDF}Description")
    return {
        "authors": [li.text or "" for li in desc.iterfind(f"{DC}creator/{RDF}Seq/{RDF}li")],
        "doi": text(desc.find(f"{PRISM}doi")),
        "title": text(desc.find(f"{DC}title/{RDF}Alt/{RDF}li")) or "",
    }


def main(argv):
    if len(argv) != 3 or argv[1] not in ("crossref", "jats", "xmp"):
        print(__doc__, file=sys.stderr)
        return 2
    parser = etree.XMLParser(resolve_entities=False, no_network=True, load_dtd=False)
    root = etree.parse(argv[2], parser).getroot()
    fields = {"crossref": crossref, "jats": jats, "xmp": xmp}[argv[1]](root)
    json.dump(fields, sys.stdout, ensure_ascii=False)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
