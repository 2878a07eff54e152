# Package marker

