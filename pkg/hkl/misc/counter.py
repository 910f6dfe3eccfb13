"""
Progress reporting of the long loops and evaluation counts of the vector fields and the Newton solves
"""

import logging
import shutil
import sys

logger = logging.getLogger(__name__)


class Counter:
    """
    Progress bar redrawn in place on a stream, only when the displayed percentage changes. Calling it with ``i`` marks
    the step ``i`` as done, ``i == -1`` being the start and ``i == n - 1`` the end.

    :param str text: The label of the bar, nothing is displayed when it is empty
    :param int n: The number of steps
    :param stream: Where to write, defaults to ``sys.stderr``
    :type stream: file-like, optional

    Example:
       >>> bar = Counter('DP', 400)
       >>> for i in range(-1, 400):
       ...     bar(i)  # redrawn at 0%, 1%, ..., 100%
    """

    def __init__(self, text, n, stream=None):
        self.text = text
        self.n = n if text else 0
        self.stream = stream
        self.shown = -1
        self.prefix = '\r{0} - '.format(text) if text else '\r'

    @classmethod
    def from_verbose(cls, verbose, default_text, n):
        """
        Build the bar matching the ``verbose`` argument of the long running functions

        :param verbose: If True or a string, displays a progress bar
        :type verbose: bool or str
        :param str default_text: The label used when ``verbose is True``
        :param int n: The number of steps
        :return: Counter
        """
        if verbose is False or verbose is None:
            return cls('', 0)
        return cls(default_text if verbose is True else verbose, n)

    def __call__(self, i):
        done = i + 1
        if not self.n or done > self.n:
            return
        percent = 100 * done // self.n
        if percent == self.shown:
            return
        self.shown = percent
        stream = self.stream if self.stream is not None else sys.stderr
        width = max(10, shutil.get_terminal_size().columns - len(self.prefix) - 8)
        stream.write('{0}|{1:<{2}}| {3:3d}%'.format(self.prefix, '-' * (width * done // self.n), width, percent))
        if done == self.n:
            stream.write('\n')
            logger.debug('%s: %d steps', self.text, self.n)
        stream.flush()


class Evaluations:
    """
    Counts the calls of a function, typically a vector field, an action gradient or a Newton solve

    :param func f: The counted function
    :param str label: The name in the log record

    Example:
       >>> field = Evaluations(kepler_field(Params()), 'Kepler field')
       >>> y = rk_4(y0, t, field, verbose=False)
       >>> field.report()
    """

    def __init__(self, f, label):
        self.f = f
        self.label = label
        self.calls = 0

    def __call__(self, *args, **kwargs):
        self.calls += 1
        return self.f(*args, **kwargs)

    def report(self, level=logging.DEBUG, detail=''):
        """
        Log the number of calls

        :param level: The logging level
        :type level: int, optional
        :param detail: Appended to the record
        :type detail: str, optional
        :return: int - The number of calls
        """
        logger.log(level, '%s: %d evaluations%s', self.label, self.calls, ', ' + detail if detail else '')
        return self.calls
