# -*- coding: utf-8 -*-
#
# modlie documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('../'))

# mock module imports for a successful build
autodoc_mock_imports = ['numpy', 'sympy', 'pandas', 'openpyxl']

# list members in source order rather than alphabetically
autodoc_member_order = 'bysource'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax'
]

source_suffix = '.rst'
master_doc = 'index'

project = u'modlie'
copyright = u'2026, modlie developers'
author = u'modlie developers'

version = u'0.1.0'
release = version

exclude_patterns = ['_build']

pygments_style = 'monokai'
autosummary_generate = True

html_theme = 'sphinx_rtd_theme'
html_sidebars = {
    '**': [
        'relations.html',
        'searchbox.html',
    ]
}

htmlhelp_basename = 'modliedoc'

latex_documents = [
    (master_doc, 'modlie.tex', u'modlie Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'modlie', u'modlie Documentation', [author], 1)
]
