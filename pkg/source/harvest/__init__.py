# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
