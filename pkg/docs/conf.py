import os
import sys

from timelaw import __author__, __copyright__, __name__, __version__


try:
    import sphinx_rtd_theme

    RTD_THEME_INSTALLED = True
except ImportError:
    RTD_THEME_INSTALLED = False


sys.path.insert(0, os.path.abspath(".."))

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = __name__
copyright = __copyright__
author = __author__
version = __version__
release = version

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"

if RTD_THEME_INSTALLED:
    html_theme = "sphinx_rtd_theme"

html_static_path = ["_static"]
htmlhelp_basename = "timelawdoc"

man_pages = [(master_doc, "timelaw", "timelaw Documentation", [author], 1)]


rp_builtin = """
.. |False| replace:: :py:obj:`False`
.. |True| replace:: :py:obj:`True`
.. |None| replace:: :py:obj:`None`
"""

rp_class = """
.. |TimeLaw| replace::
    :py:class:`~timelaw.TimeLaw`
.. |SolutionReport| replace::
    :py:class:`~timelaw.SolutionReport`
"""

rst_prolog = rp_class + rp_builtin
