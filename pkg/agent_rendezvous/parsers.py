import io

from rest_framework import exceptions
from rest_framework import parsers

from . import renderers


class JSONLinesParser(parsers.JSONParser):
    """
    JSON lines parser, one document per non-blank line.
    """
    media_type = renderers.JSONLinesRenderer.media_type
    renderer_class = renderers.JSONLinesRenderer

    def parse(self, stream, media_type=None, parser_context=None):
        parse_line = super(JSONLinesParser, self).parse
        documents = []
        for number, line in enumerate(stream, 1):
            if not line.strip():
                continue
            try:
                documents.append(parse_line(
                    io.BytesIO(line), media_type, parser_context))
            except exceptions.ParseError as exc:
                raise exceptions.ParseError(
                    'Line {0}: {1}'.format(number, exc.detail))
        return documents
