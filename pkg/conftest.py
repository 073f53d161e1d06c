#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""테스트 공용 픽스처"""

import pytest

from expr_utils import make_context, parse
from rewrite_utils import normalize


@pytest.fixture(params=[2, 3], ids=lambda d: f"d{d}")
def d(request):
    """짝수, 홀수 차원 한 쌍"""
    return request.param


@pytest.fixture
def ctx():
    return make_context


@pytest.fixture
def normal_form():
    """문자열을 (d, k, n) 에서 구문 분석하고 정규화하는 도우미"""

    def build(text, d, k, n):
        context = make_context(d, k, n)
        return normalize(parse(text, context), context)

    return build
