"""
Sectioned key/value reports, rendered as dotted text or as a one-row CSV.
"""

from collections import OrderedDict
from core.utils.file_utils import save_txt
from core.utils.csv_utils import save_csv


PREC = 10
WIDTH = 63
PART = 4/6


class SimpleReport(object):
    """
    The simplest report: named sections of (parameter, value) pairs.
    """

    def __init__(self, title):
        """
        Creates a new report.
        :param title: (string) the title of the report.
        """
        self.title = title
        self.params = OrderedDict()

    def add(self, section_title, param_title, param_value):
        """
        Adds a parameter to a section, creating the section if needed.
        :param section_title: (string) the section.
        :param param_title: (string) the parameter name.
        :param param_value: (object) the parameter value.
        :return: None
        """
        self.params.setdefault(section_title, []).append((param_title, param_value))

    def add_all(self, section_title, mapping):
        """
        Adds every (name, value) of a mapping, in iteration order.
        :param section_title: (string) the section.
        :param mapping: (dict) the values.
        :return: None
        """
        for name, value in mapping.items():
            self.add(section_title, name, value)

    def get(self, section_title, param_title):
        """
        Retrieve the value of a parameter.
        :param section_title: the section.
        :param param_title: the parameter name.
        :return: the value, if present; None, otherwise.
        """
        for name, value in self.params.get(section_title, []):
            if name == param_title:
                return value
        return None

    def save_txt(self, filename, append=False, empty=False):
        """
        Save the text rendering.
        :param filename: (string) the file path.
        :param append: (bool) if True, append to an existing file.
        :param empty: (bool) if True, the file is emptied.
        :return: None
        """
        save_txt(str(self), filename, append=append, empty=empty)

    def save_csv(self, filename, append=False, skip_header=False, empty=False, comments=None):
        """
        Save the report as a single CSV row; columns are named section_param.
        :param filename: (string) the file path.
        :param append: (bool) if True, append to an existing file.
        :param skip_header: (bool) if True, skip the CSV header.
        :param empty: (bool) if True, the file is emptied.
        :param comments: (list(string)) the comment block.
        :return: None
        """
        header = ["name"]
        row = [self.title]
        for section, pairs in self.params.items():
            for name, value in pairs:
                header.append("{}_{}".format(section, name))
                row.append(_render(value))
        save_csv(filename, header, [row], append, skip_header, empty, comments)

    def __str__(self):
        title_separator = "=" * WIDTH

        fmt_title = "\n{}\n{:^" + str(WIDTH) + "}\n{}\n"
        fmt_section = "\n{:^" + str(WIDTH) + "}\n"
        fmt_value = "{:.<" + str(int(PART * WIDTH)) + "}{:.>" + str(int((1.0 - PART) * WIDTH)) + "}\n"

        s = fmt_title.format(title_separator, self.title, title_separator)
        for section, pairs in self.params.items():
            s += fmt_section.format(section)
            for name, value in pairs:
                s += fmt_value.format(str(name), _render(value))
        return s


def _render(value):
    return str(round(value, PREC)) if isinstance(value, float) else str(value)
