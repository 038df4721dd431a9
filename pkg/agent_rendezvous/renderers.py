import json

from rest_framework import renderers


class JSONLinesRenderer(renderers.JSONRenderer):
    """
    One compact JSON document per line, for traces and annotation streams.
    """
    media_type = 'application/jsonl'
    format = 'jsonl'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        if data is None:
            return b''
        render_line = super(JSONLinesRenderer, self).render
        return b''.join(
            render_line(line, accepted_media_type, renderer_context) + b'\n'
            for line in data)


class TSVRenderer(renderers.BaseRenderer):
    """
    Tab separated tables with a header row.

    Pass the column order as ``renderer_context['header']``, otherwise the
    keys of the first row are used.
    """
    media_type = 'text/tab-separated-values'
    format = 'tsv'
    charset = 'utf-8'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        rows = list(data or ())
        header = (renderer_context or {}).get('header')
        if header is None:
            header = list(rows[0]) if rows else []
        lines = ['\t'.join(header)]
        for row in rows:
            lines.append('\t'.join(
                self.format_value(row.get(column)) for column in header))
        return ('\n'.join(lines) + '\n').encode(self.charset)

    def format_value(self, value):
        if value is None:
            return ''
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, (dict, list)):
            return json.dumps(value, sort_keys=True)
        return str(value)
