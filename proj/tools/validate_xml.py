#!/usr/bin/env python3
"""Validate XML files with lxml.

usage: validate_xml.py wellformed FILE...
       validate_xml.py dtd DTD FILE...
       validate_xml.py xsd XSD FILE...

Exit 0 when every file is valid, 1 when any is invalid (errors on stderr),
2 on usage or missing-schema problems.
"""

import os
import sys

from lxml import etree


def load_validator(mode, schema_path):
    if not os.path.exists(schema_path):
        print(f"schema not found: {schema_path}", file=sys.stderr)
        return None
    if mode == "dtd":
        return etree.DTD(schema_path)
    try:
        return etree.XMLSchema(etree.parse(schema_path))
    except etree.XMLSchemaParseError as e:
        print(f"cannot load schema {schema_path}: {e}", file=sys.stderr)
        return None


def main(argv):
    if len(argv) < 3 or argv[1] not in ("wellformed", "dtd", "xsd"):
        print(__doc__, file=sys.stderr)
        return 2
    mode = argv[1]
    validator = None
    files = argv[2:]
    if mode != "wellformed":
        if len(argv) < 4:
            print(__doc__, file=sys.stderr)
            return 2
        validator = load_validator(mode, argv[2])
        if validator is None:
            return 2
        files = argv[3:]

    parser = etree.XMLParser(resolve_entities=False, no_network=True, load_dtd=False)
    status = 0
    for path in files:
        try:
            doc = etree.parse(path, parser)
        except (etree.XMLSyntaxError, OSError) as e:
            print(f"{path}: not well-formed: {e}", file=sys.stderr)
            status = 1
            continue
        if validator is not None and not validator.validate(doc):
            for err in validator.error_log:
                print(f"{path}:{err.line}: {err.message}", file=sys.stderr)
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main(sys.argv))
