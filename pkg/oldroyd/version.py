__version__ = '0.3.1'

import sys
OS_VERSION = str(sys.platform)
PYTHON_VERSION = "{0}.{1}.{2}".format(*sys.version_info[:3])
BUILD_TAG = 'oldroyd-fe-v' + __version__ + ", {0}, {1}".format(PYTHON_VERSION, OS_VERSION)
